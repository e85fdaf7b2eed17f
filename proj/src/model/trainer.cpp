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

#include "critiq/model/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <spdlog/spdlog.h>

#include "critiq/error.hpp"
#include "critiq/nn/adam.hpp"

namespace critiq {
namespace {

void add_l2(MmvaeModel<float>& model, ModelGradients<float>& grads,
            double l2_weight, double& loss) {
  if (l2_weight == 0.0) return;
  TwoLayerNet<float>* nets[] = {&model.enc_r, &model.enc_k, &model.dec_r,
                                &model.dec_k};
  auto grad_nets = grads.nets();
  for (std::size_t n = 0; n < 4; ++n) {
    const auto blocks = nets[n]->blocks();
    auto g = grad_nets[n]->blocks();
    // Weights only (blocks 0 and 2); biases are not penalised.
    for (std::size_t b : {0, 2}) {
      auto w = blocks[b]->values();
      auto gw = g[b]->values();
      loss += l2_weight * squared_norm(w);
      for (std::size_t i = 0; i < w.size(); ++i) {
        gw[i] += static_cast<float>(2.0 * l2_weight * w[i]);
      }
    }
  }
}

}  // namespace

MmvaeModel<float> create_model(const Dataset& dataset,
                               const TrainingConfig& config) {
  config.validate();
  Rng rng(config.seed);
  return MmvaeModel<float>::create({dataset.n_items(), dataset.n_keyphrases(),
                                    config.latent_dim, config.effective_hidden()},
                                   rng);
}

TrainingReport train(MmvaeModel<float>& model, const Dataset& dataset,
                     const ModalityMask& mask, const TrainingConfig& config,
                     const EpochCallback& on_epoch) {
  config.validate();
  const ModelDims dims = model.dims();
  if (dims.n_items != dataset.n_items() ||
      dims.n_keyphrases != dataset.n_keyphrases()) {
    throw ContractViolation("train: model dims do not match the dataset");
  }
  const std::size_t n_users = dataset.n_users();
  if (mask.size() != n_users) {
    throw ContractViolation("train: modality mask size mismatch");
  }

  Rng rng(config.seed ^ 0x5851f42d4c957f2dULL);
  std::vector<std::size_t> order(n_users);
  std::iota(order.begin(), order.end(), 0);
  const std::size_t batches_per_epoch =
      (n_users + config.batch_size - 1) / config.batch_size;
  const std::size_t anneal =
      config.anneal_steps > 0 ? config.anneal_steps : std::max<std::size_t>(1, batches_per_epoch);

  AdamAmsgrad<float> optimizer({config.learning_rate});
  auto grads = ModelGradients<float>::zeros_like(model);
  TrainingReport report;
  const std::size_t h = dims.latent;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    std::size_t epoch_users = 0;

    for (std::size_t start = 0; start < n_users; start += config.batch_size) {
      const std::size_t end = std::min(n_users, start + config.batch_size);
      SparseRows joint_r, joint_k, only_r, only_k;
      for (std::size_t p = start; p < end; ++p) {
        const std::size_t u = order[p];
        const auto r = dataset.r_train.row(u);
        const auto k = dataset.k_user.row(u);
        const bool has_r = mask[u].r_observed && !r.empty();
        const bool has_k = mask[u].k_observed && !k.empty();
        if (has_r && has_k) {
          joint_r.push_back(r);
          joint_k.push_back(k);
        }
        if (has_r) only_r.push_back(r);
        if (has_k) only_k.push_back(k);
      }
      const std::size_t batch_users =
          only_r.size() + only_k.size() - joint_r.size();
      if (batch_users == 0) continue;

      const double beta =
          config.beta_target *
          std::min(1.0, static_cast<double>(report.steps) / static_cast<double>(anneal));
      const TermOptions options{{config.lambda, beta}, config.dropout, true};

      grads.zero();
      double loss = 0.0;
      if (!joint_r.empty()) {
        const auto eps_r = standard_normal<float>(joint_r.size(), h, rng);
        const auto eps_k = standard_normal<float>(joint_r.size(), h, rng);
        loss += elbo_joint(model, joint_r, joint_k, eps_r, eps_k,
                           config.estimator, options, rng, &grads);
      }
      if (!only_r.empty()) {
        const auto eps = standard_normal<float>(only_r.size(), h, rng);
        loss += elbo_single(model, Modality::kInteractions, only_r, eps,
                            options, rng, &grads);
      }
      if (!only_k.empty()) {
        const auto eps = standard_normal<float>(only_k.size(), h, rng);
        loss += elbo_single(model, Modality::kKeyphrases, only_k, eps,
                            options, rng, &grads);
      }
      add_l2(model, grads, config.l2_weight, loss);

      const double scale = 1.0 / static_cast<double>(batch_users);
      for (auto* net : grads.nets()) net->scale(scale);
      if (!std::isfinite(loss)) {
        throw DivergenceError("training diverged: non-finite loss at epoch " +
                              std::to_string(epoch) + ", step " +
                              std::to_string(report.steps));
      }

      std::vector<std::span<float>> params;
      std::vector<std::span<const float>> grad_views;
      TwoLayerNet<float>* nets[] = {&model.enc_r, &model.enc_k, &model.dec_r,
                                    &model.dec_k};
      auto grad_nets = grads.nets();
      for (std::size_t n = 0; n < 4; ++n) {
        for (auto* block : nets[n]->mutable_blocks()) params.push_back(block->values());
        for (auto* block : grad_nets[n]->blocks()) grad_views.push_back(block->values());
      }
      try {
        optimizer.step(params, grad_views);
      } catch (const DivergenceError& e) {
        throw DivergenceError(std::string(e.what()) + " at epoch " +
                              std::to_string(epoch));
      }
      ++report.steps;
      epoch_loss += loss;
      epoch_users += batch_users;
    }

    const double mean_loss = epoch_users > 0 ? epoch_loss / epoch_users : 0.0;
    report.epoch_loss.push_back(mean_loss);
    if (on_epoch) on_epoch(epoch, mean_loss);
  }
  return report;
}

}  // namespace critiq
