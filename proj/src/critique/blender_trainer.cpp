// Copyright 2026 The critiq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "critiq/critique/blender_trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <string>

#include <spdlog/spdlog.h>

#include "critiq/critique/max_margin.hpp"
#include "critiq/error.hpp"
#include "critiq/nn/adam.hpp"

namespace critiq {

void BlenderConfig::validate() const {
  if (!(margin > 0.0)) throw ValidationError("margin must be > 0");
  if (!(learning_rate > 0.0)) throw ValidationError("learning_rate must be > 0");
  if (!(l2_weight >= 0.0)) throw ValidationError("l2_weight must be >= 0");
  if (epochs == 0) throw ValidationError("epochs must be positive");
  if (batch_size == 0) throw ValidationError("batch_size must be positive");
}

BlenderConfig blender_preset(std::string_view name) {
  BlenderConfig c;
  if (name == "toy") {
    c.margin = 2.0;
    c.epochs = 60;
    return c;
  }
  if (name == "beer") {
    c.margin = 0.75;
  } else if (name == "cds") {
    c.margin = 3.0;
    c.l2_weight = 1e-10;
  } else if (name == "yelp") {
    c.margin = 2.0;
  } else if (name == "hotel") {
    c.margin = 5.0;
    c.l2_weight = 1e-10;
  } else {
    throw ValidationError("unknown preset '" + std::string(name) + "'");
  }
  return c;
}

template <typename T>
Matrix<T> base_latents(const MmvaeModel<T>& model, const SparseBinaryMatrix& r_train) {
  Matrix<T> out(r_train.n_rows(), model.dec_r.in_dim());
  for (std::size_t u = 0; u < r_train.n_rows(); ++u) {
    const auto r = r_train.row(u);
    if (r.empty()) continue;
    const auto mu = expert_posterior(model, Modality::kInteractions, r).mu;
    std::copy(mu.begin(), mu.end(), out.row(u).begin());
  }
  return out;
}

template <typename T>
Matrix<T> critique_latents(const MmvaeModel<T>& model) {
  const std::size_t n_k = model.enc_k.in_dim();
  Matrix<T> out(n_k, model.dec_r.in_dim());
  for (Index c = 0; c < n_k; ++c) {
    const Index row[] = {c};
    const auto mu =
        expert_posterior(model, Modality::kKeyphrases, std::span<const Index>(row)).mu;
    std::copy(mu.begin(), mu.end(), out.row(c).begin());
  }
  return out;
}

template <typename T>
double blender_objective(const MmvaeModel<T>& model, const BlendGate<T>& gate,
                         std::span<const SyntheticExample* const> batch,
                         const Matrix<T>& user_latents,
                         const Matrix<T>& keyphrase_latents, double margin,
                         BlendGate<T>* grads) {
  const std::size_t b = batch.size();
  const std::size_t h = gate.dim();
  if (b == 0) return 0.0;
  Matrix<T> z0(b, h), blended(b, h);
  std::vector<BlendTrace<T>> traces;
  traces.reserve(b);
  for (std::size_t e = 0; e < b; ++e) {
    const auto base = user_latents.row(batch[e]->user);
    std::copy(base.begin(), base.end(), z0.row(e).begin());
    traces.push_back(blend_forward(gate, base, keyphrase_latents.row(batch[e]->critique)));
    std::copy(traces.back().output.begin(), traces.back().output.end(),
              blended.row(e).begin());
  }
  const auto before = model.dec_r.predict(z0);
  Rng unused;
  const auto after = model.dec_r.forward(blended, 0.0, false, unused);

  double loss = 0.0;
  Matrix<T> dlogits(b, after.output.cols());
  for (std::size_t e = 0; e < b; ++e) {
    const auto m = max_margin_loss<T>(before.row(e), after.output.row(e),
                                      batch[e]->affected, batch[e]->unaffected, margin);
    loss += m.loss;
    auto row = dlogits.row(e);
    for (std::size_t i = 0; i < row.size(); ++i) row[i] = static_cast<T>(m.grad_after[i]);
  }
  if (grads != nullptr) {
    const auto dz = model.dec_r.backward(after, dlogits, nullptr, true);
    for (std::size_t e = 0; e < b; ++e) blend_backward(gate, traces[e], dz.row(e), *grads);
  }
  return loss;
}

BlenderReport train_blender(const MmvaeModel<float>& model, const Dataset& dataset,
                            BlendGate<float>& gate, const BlenderConfig& config,
                            const BlenderCallback& on_epoch) {
  config.validate();
  if (gate.dim() != model.dec_r.in_dim()) {
    throw ContractViolation("gate width does not match the model latent width");
  }
  Rng rng(config.seed);
  std::vector<IndexList> universe;
  if (config.restrict_top > 0) {
    universe = top_items_per_user(model, dataset.r_train, config.restrict_top);
  }
  const auto synthetic = build_synthetic_dataset(
      dataset.r_val, dataset.k_item, rng, config.restrict_top > 0 ? &universe : nullptr);

  std::vector<const SyntheticExample*> pool;
  for (const auto& ex : synthetic.examples) {
    if (!dataset.r_train.row(ex.user).empty()) pool.push_back(&ex);
  }
  BlenderReport report;
  report.examples = pool.size();
  report.skipped = synthetic.skipped;
  spdlog::info("blender: {} synthetic examples ({} items skipped)", pool.size(),
               synthetic.skipped);
  if (pool.empty()) {
    spdlog::warn("blender: no synthetic examples; gate left untouched");
    return report;
  }

  const auto users = base_latents(model, dataset.r_train);
  const auto keyphrases = critique_latents(model);
  AdamAmsgrad<float> optimizer({config.learning_rate});
  BlendGate<float> grads(gate.dim());

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(pool.begin(), pool.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < pool.size(); start += config.batch_size) {
      const std::size_t end = std::min(pool.size(), start + config.batch_size);
      const std::span<const SyntheticExample* const> batch(pool.data() + start, end - start);
      grads.zero();
      double loss = blender_objective<float>(model, gate, batch, users, keyphrases,
                                             config.margin, &grads);
      epoch_loss += loss;
      if (config.l2_weight > 0.0) {
        auto g = grads.blocks();
        const auto p = std::as_const(gate).blocks();
        for (std::size_t k = 0; k < 6; ++k) {
          loss += config.l2_weight * squared_norm(p[k]->values());
          auto gv = g[k]->values();
          const auto pv = p[k]->values();
          for (std::size_t i = 0; i < gv.size(); ++i) {
            gv[i] += static_cast<float>(2.0 * config.l2_weight * pv[i]);
          }
        }
      }
      if (!std::isfinite(loss)) {
        throw DivergenceError("blender training diverged at epoch " + std::to_string(epoch));
      }
      const double scale = 1.0 / static_cast<double>(batch.size());
      std::vector<std::span<float>> params;
      std::vector<std::span<const float>> grad_views;
      auto pb = gate.blocks();
      auto gb = grads.blocks();
      for (std::size_t k = 0; k < 9; ++k) {
        for (float& v : gb[k]->values()) v = static_cast<float>(v * scale);
        params.push_back(pb[k]->values());
        grad_views.push_back(gb[k]->values());
      }
      optimizer.step(params, grad_views);
      ++report.steps;
    }
    const double mean = epoch_loss / static_cast<double>(pool.size());
    report.epoch_loss.push_back(mean);
    if (on_epoch) on_epoch(epoch, mean);
  }
  return report;
}

#define CRITIQ_INSTANTIATE(T)                                                      \
  template Matrix<T> base_latents(const MmvaeModel<T>&, const SparseBinaryMatrix&); \
  template Matrix<T> critique_latents(const MmvaeModel<T>&);                       \
  template double blender_objective(const MmvaeModel<T>&, const BlendGate<T>&,     \
                                    std::span<const SyntheticExample* const>,      \
                                    const Matrix<T>&, const Matrix<T>&, double,    \
                                    BlendGate<T>*);

CRITIQ_INSTANTIATE(float)
CRITIQ_INSTANTIATE(double)

#undef CRITIQ_INSTANTIATE

}  // namespace critiq
