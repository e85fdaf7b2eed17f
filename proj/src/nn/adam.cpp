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

#include "critiq/nn/adam.hpp"

#include <algorithm>
#include <cmath>

#include "critiq/error.hpp"

namespace critiq {

template <typename T>
void AdamAmsgrad<T>::step(const std::vector<std::span<T>>& params,
                          const std::vector<std::span<const T>>& grads) {
  if (params.size() != grads.size()) {
    throw ContractViolation("adam: parameter/gradient block count mismatch");
  }
  for (std::size_t b = 0; b < params.size(); ++b) {
    if (params[b].size() != grads[b].size()) {
      throw ContractViolation("adam: block " + std::to_string(b) +
                              " shape mismatch");
    }
    for (T g : grads[b]) {
      if (!std::isfinite(g)) {
        throw DivergenceError("adam: non-finite gradient in block " +
                              std::to_string(b));
      }
    }
  }
  if (m_.empty()) {
    for (const auto& p : params) {
      m_.emplace_back(p.size(), T(0));
      v_.emplace_back(p.size(), T(0));
      v_max_.emplace_back(p.size(), T(0));
    }
  } else if (m_.size() != params.size()) {
    throw ContractViolation("adam: parameter layout changed between steps");
  }

  ++t_;
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  const double bc1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  const double step_size = config_.learning_rate / bc1;
  const double sqrt_bc2 = std::sqrt(bc2);

  for (std::size_t b = 0; b < params.size(); ++b) {
    auto p = params[b];
    auto g = grads[b];
    auto& m = m_[b];
    auto& v = v_[b];
    auto& vmax = v_max_[b];
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double gi = g[i];
      const double mi = b1 * m[i] + (1.0 - b1) * gi;
      const double vi = b2 * v[i] + (1.0 - b2) * gi * gi;
      m[i] = static_cast<T>(mi);
      v[i] = static_cast<T>(vi);
      vmax[i] = std::max(vmax[i], v[i]);
      const double denom = std::sqrt(static_cast<double>(vmax[i])) / sqrt_bc2 +
                           config_.epsilon;
      p[i] = static_cast<T>(p[i] - step_size * mi / denom);
    }
  }
}

template class AdamAmsgrad<float>;
template class AdamAmsgrad<double>;

}  // namespace critiq
