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

#include "critiq/model/elbo.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "critiq/error.hpp"

namespace critiq {
namespace {

// Adds -lambda * w * log p(x | logits) for every row and writes the logit
// gradient into `dlogits`.
template <typename T>
double reconstruction(const Matrix<T>& logits, const SparseRows& targets,
                      std::span<const double> row_weights, double lambda,
                      Matrix<T>& dlogits) {
  double loss = 0.0;
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    const auto lsm = log_softmax(logits.row(r));
    const auto& x = targets[r];
    const double w = row_weights[r];
    double ll = 0.0;
    for (Index i : x) ll += lsm[i];
    loss -= lambda * w * ll;
    // d(-lambda * w * ll)/dlogit_j = -lambda * w * (x_j - n * p_j)
    const double n = static_cast<double>(x.size());
    auto g = dlogits.row(r);
    for (std::size_t j = 0; j < g.size(); ++j) {
      g[j] = static_cast<T>(lambda * w * n * std::exp(lsm[j]));
    }
    for (Index i : x) g[i] = static_cast<T>(g[i] - lambda * w);
  }
  return loss;
}

}  // namespace

template <typename T>
double expert_term(const MmvaeModel<T>& model, Modality encoder,
                   const SparseRows& encoder_rows, const SparseRows* r_targets,
                   const SparseRows* k_targets,
                   std::span<const double> row_weights, const Matrix<T>& eps,
                   const TermOptions& options, Rng& rng,
                   ModelGradients<T>* grads) {
  const std::size_t batch = encoder_rows.size();
  const std::size_t h = model.dec_r.in_dim();
  if (row_weights.size() != batch || eps.rows() != batch || eps.cols() != h) {
    throw ContractViolation("expert_term: batch shape mismatch");
  }
  for (const SparseRows* t : {r_targets, k_targets}) {
    if (t != nullptr && t->size() != batch) {
      throw ContractViolation("expert_term: target batch size mismatch");
    }
  }

  const auto& enc = model.encoder(encoder);
  const auto x = normalized_indicator_rows<T>(encoder_rows, enc.in_dim());
  const auto enc_cache = enc.forward(x, options.dropout, options.training, rng);
  const auto out = split_encoder_output(enc_cache.output);

  Matrix<T> sigma(batch, h), z(batch, h);
  for (std::size_t r = 0; r < batch; ++r) {
    for (std::size_t d = 0; d < h; ++d) {
      const double ls =
          std::clamp<double>(out.log_sigma_raw(r, d), kLogSigmaMin, kLogSigmaMax);
      sigma(r, d) = static_cast<T>(std::exp(ls));
      z(r, d) = static_cast<T>(out.mu(r, d) + eps(r, d) * sigma(r, d));
    }
  }

  const double lambda = options.weights.lambda;
  const double beta = options.weights.beta;
  double loss = 0.0;
  Matrix<T> dz(batch, h);

  const std::pair<Modality, const SparseRows*> targets[] = {
      {Modality::kInteractions, r_targets}, {Modality::kKeyphrases, k_targets}};
  for (const auto& [modality, rows] : targets) {
    if (rows == nullptr) continue;
    const auto& dec = model.decoder(modality);
    const auto dec_cache = dec.forward(z, 0.0, false, rng);
    Matrix<T> dlogits(batch, dec.out_dim());
    loss += reconstruction(dec_cache.output, *rows, row_weights, lambda, dlogits);
    if (grads != nullptr) {
      const auto dz_part =
          dec.backward(dec_cache, dlogits, &grads->decoder(modality));
      auto acc = dz.values();
      auto part = dz_part.values();
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += part[i];
    }
  }

  for (std::size_t r = 0; r < batch; ++r) {
    double kl = 0.0;
    for (std::size_t d = 0; d < h; ++d) {
      const double mu = out.mu(r, d);
      const double s = sigma(r, d);
      kl += 0.5 * (s * s + mu * mu - 1.0 - 2.0 * std::log(s));
    }
    loss += row_weights[r] * beta * kl;
  }

  if (grads != nullptr) {
    Matrix<T> denc(batch, 2 * h);
    for (std::size_t r = 0; r < batch; ++r) {
      const double wb = row_weights[r] * beta;
      for (std::size_t d = 0; d < h; ++d) {
        const double mu = out.mu(r, d);
        const double s = sigma(r, d);
        const double raw = out.log_sigma_raw(r, d);
        denc(r, d) = static_cast<T>(dz(r, d) + wb * mu);
        const bool inside = raw >= kLogSigmaMin && raw <= kLogSigmaMax;
        denc(r, h + d) = inside ? static_cast<T>(dz(r, d) * eps(r, d) * s +
                                                 wb * (s * s - 1.0))
                                : T(0);
      }
    }
    enc.backward(enc_cache, denc, &grads->encoder(encoder), false);
  }
  return loss;
}

template <typename T>
double elbo_single(const MmvaeModel<T>& model, Modality modality,
                   const SparseRows& x, const Matrix<T>& eps,
                   const TermOptions& options, Rng& rng,
                   ModelGradients<T>* grads) {
  const std::vector<double> ones(x.size(), 1.0);
  const bool is_r = modality == Modality::kInteractions;
  return expert_term(model, modality, x, is_r ? &x : nullptr,
                     is_r ? nullptr : &x, ones, eps, options, rng, grads);
}

template <typename T>
double elbo_joint(const MmvaeModel<T>& model, const SparseRows& r,
                  const SparseRows& k, const Matrix<T>& eps_r,
                  const Matrix<T>& eps_k, MixtureEstimator estimator,
                  const TermOptions& options, Rng& rng,
                  ModelGradients<T>* grads) {
  if (r.size() != k.size()) {
    throw ContractViolation("elbo_joint: modality batch sizes differ");
  }
  std::vector<double> w_r(r.size(), 0.5), w_k(r.size(), 0.5);
  if (estimator == MixtureEstimator::kSampleExpert) {
    std::bernoulli_distribution coin(0.5);
    for (std::size_t u = 0; u < r.size(); ++u) {
      const bool pick_r = coin(rng);
      w_r[u] = pick_r ? 1.0 : 0.0;
      w_k[u] = pick_r ? 0.0 : 1.0;
    }
  }
  return expert_term(model, Modality::kInteractions, r, &r, &k, w_r, eps_r,
                     options, rng, grads) +
         expert_term(model, Modality::kKeyphrases, k, &r, &k, w_k, eps_k,
                     options, rng, grads);
}

template <typename T>
Matrix<T> standard_normal(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix<T> out(rows, cols);
  for (T& v : out.values()) v = static_cast<T>(normal(rng));
  return out;
}

#define CRITIQ_INSTANTIATE(T)                                                  \
  template double expert_term(const MmvaeModel<T>&, Modality,                 \
                              const SparseRows&, const SparseRows*,           \
                              const SparseRows*, std::span<const double>,     \
                              const Matrix<T>&, const TermOptions&, Rng&,     \
                              ModelGradients<T>*);                            \
  template double elbo_single(const MmvaeModel<T>&, Modality,                 \
                              const SparseRows&, const Matrix<T>&,            \
                              const TermOptions&, Rng&, ModelGradients<T>*);  \
  template double elbo_joint(const MmvaeModel<T>&, const SparseRows&,         \
                             const SparseRows&, const Matrix<T>&,             \
                             const Matrix<T>&, MixtureEstimator,              \
                             const TermOptions&, Rng&, ModelGradients<T>*);   \
  template Matrix<T> standard_normal(std::size_t, std::size_t, Rng&);

CRITIQ_INSTANTIATE(float)
CRITIQ_INSTANTIATE(double)

#undef CRITIQ_INSTANTIATE

}  // namespace critiq
