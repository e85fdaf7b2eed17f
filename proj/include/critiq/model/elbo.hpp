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

#pragma once

#include <span>

#include "critiq/model/mmvae.hpp"

namespace critiq {

struct LossWeights {
  double lambda = 1.0;  // reconstruction weight
  double beta = 1.0;    // KL weight
};

// How the two-expert mixture enters the joint bound.
enum class MixtureEstimator {
  kStratified,    // average the per-expert bounds with weights 1/2
  kSampleExpert,  // draw one expert per user
};

struct TermOptions {
  LossWeights weights;
  double dropout = 0.0;
  bool training = false;
};

// Negative bound of one expert, summed over the batch rows and scaled per
// row by `row_weights`:
//   w_u * ( -lambda * sum_targets log p(x_u | z_u) + beta * KL(q_e(z|x_e) || p) )
// with z_u = mu + eps * sigma from the `encoder` expert. Targets that are
// null are not reconstructed. Gradients are accumulated into `grads` when
// non-null.
template <typename T>
double expert_term(const MmvaeModel<T>& model, Modality encoder,
                   const SparseRows& encoder_rows, const SparseRows* r_targets,
                   const SparseRows* k_targets,
                   std::span<const double> row_weights, const Matrix<T>& eps,
                   const TermOptions& options, Rng& rng,
                   ModelGradients<T>* grads);

// Single-modality bound: encode x with its own expert, reconstruct x only.
template <typename T>
double elbo_single(const MmvaeModel<T>& model, Modality modality,
                   const SparseRows& x, const Matrix<T>& eps,
                   const TermOptions& options, Rng& rng,
                   ModelGradients<T>* grads);

// Joint bound under the mixture posterior; both modalities reconstructed
// from each expert's sample.
template <typename T>
double elbo_joint(const MmvaeModel<T>& model, const SparseRows& r,
                  const SparseRows& k, const Matrix<T>& eps_r,
                  const Matrix<T>& eps_k, MixtureEstimator estimator,
                  const TermOptions& options, Rng& rng,
                  ModelGradients<T>* grads);

// Standard-normal noise, rows x cols.
template <typename T>
Matrix<T> standard_normal(std::size_t rows, std::size_t cols, Rng& rng);

}  // namespace critiq
