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

#include "critiq/model/gaussian.hpp"

#include <algorithm>
#include <cmath>

#include "critiq/error.hpp"

namespace critiq {

template <typename T>
std::vector<T> reparam_sample(const GaussianParams<T>& params,
                              std::span<const T> epsilon) {
  if (epsilon.size() != params.dim() || params.sigma.size() != params.dim()) {
    throw ContractViolation("reparam_sample: dimension mismatch");
  }
  std::vector<T> z(params.dim());
  for (std::size_t d = 0; d < z.size(); ++d) {
    const double sigma = std::max<double>(params.sigma[d], kSigmaFloor);
    z[d] = static_cast<T>(params.mu[d] + epsilon[d] * sigma);
  }
  return z;
}

template <typename T>
double kl_std_normal(const GaussianParams<T>& params) {
  double kl = 0.0;
  for (std::size_t d = 0; d < params.dim(); ++d) {
    const double mu = params.mu[d];
    const double sigma = params.sigma[d];
    if (!(sigma > 0.0)) throw ContractViolation("kl_std_normal: sigma <= 0");
    kl += 0.5 * (sigma * sigma + mu * mu - 1.0 - 2.0 * std::log(sigma));
  }
  return kl;
}

template <typename T>
std::vector<double> log_softmax(std::span<const T> logits) {
  std::vector<double> out(logits.size());
  if (logits.empty()) return out;
  const double max = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (T v : logits) sum += std::exp(v - max);
  const double log_z = max + std::log(sum);
  for (std::size_t i = 0; i < logits.size(); ++i) out[i] = logits[i] - log_z;
  return out;
}

template <typename T>
double multinomial_loglik(std::span<const Index> x, std::span<const T> logits) {
  if (x.empty()) return 0.0;
  const auto lsm = log_softmax(logits);
  double ll = 0.0;
  for (Index i : x) {
    if (i >= logits.size()) {
      throw ContractViolation("multinomial_loglik: index out of range");
    }
    ll += lsm[i];
  }
  return ll;
}

#define CRITIQ_INSTANTIATE(T)                                                  \
  template std::vector<T> reparam_sample(const GaussianParams<T>&,            \
                                         std::span<const T>);                 \
  template double kl_std_normal(const GaussianParams<T>&);                    \
  template std::vector<double> log_softmax(std::span<const T>);               \
  template double multinomial_loglik(std::span<const Index>, std::span<const T>);

CRITIQ_INSTANTIATE(float)
CRITIQ_INSTANTIATE(double)

#undef CRITIQ_INSTANTIATE

}  // namespace critiq
