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

#include <cstdint>
#include <span>
#include <vector>

namespace critiq {

struct AdamConfig {
  double learning_rate = 5e-5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Adam with the AMSGrad correction: the denominator uses the running maximum
// of the second-moment estimate. State is lazily shaped on the first step.
template <typename T>
class AdamAmsgrad {
 public:
  explicit AdamAmsgrad(AdamConfig config = {}) : config_(config) {}

  // Applies one update to every block. Throws DivergenceError (and leaves
  // parameters and state untouched) if any gradient is non-finite.
  void step(const std::vector<std::span<T>>& params,
            const std::vector<std::span<const T>>& grads);

  std::uint64_t steps() const { return t_; }
  const AdamConfig& config() const { return config_; }
  // Running max of the second moment, per block.
  const std::vector<std::vector<T>>& max_second_moment() const { return v_max_; }

 private:
  AdamConfig config_;
  std::uint64_t t_ = 0;
  std::vector<std::vector<T>> m_, v_, v_max_;
};

}  // namespace critiq
