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
#include <vector>

#include "critiq/data/sparse_matrix.hpp"

namespace critiq {

// Encoders emit log-sigma; it is clamped to this range before exp().
inline constexpr double kLogSigmaMin = -6.0;
inline constexpr double kLogSigmaMax = 2.0;
inline constexpr double kSigmaFloor = 1e-6;

// Diagonal Gaussian.
template <typename T>
struct GaussianParams {
  std::vector<T> mu;
  std::vector<T> sigma;

  std::size_t dim() const { return mu.size(); }
  bool operator==(const GaussianParams&) const = default;
};

// z = mu + epsilon * sigma, with sigma floored at kSigmaFloor.
template <typename T>
std::vector<T> reparam_sample(const GaussianParams<T>& params,
                              std::span<const T> epsilon);

// KL(N(mu, diag sigma^2) || N(0, I)).
template <typename T>
double kl_std_normal(const GaussianParams<T>& params);

template <typename T>
std::vector<double> log_softmax(std::span<const T> logits);

// Sum over the positive entries of x of log softmax(logits).
template <typename T>
double multinomial_loglik(std::span<const Index> x, std::span<const T> logits);

}  // namespace critiq
