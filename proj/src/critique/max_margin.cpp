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

#include "critiq/critique/max_margin.hpp"

#include "critiq/error.hpp"

namespace critiq {

template <typename T>
MarginLoss max_margin_loss(std::span<const T> before, std::span<const T> after,
                           std::span<const Index> affected,
                           std::span<const Index> unaffected, double margin) {
  if (!(margin > 0.0)) throw ContractViolation("margin must be positive");
  if (before.size() != after.size()) {
    throw ContractViolation("score vectors differ in length");
  }
  MarginLoss out;
  out.grad_after.assign(after.size(), 0.0);
  for (Index i : affected) {
    if (i >= after.size()) throw ContractViolation("affected item out of range");
    const double slack = margin - (static_cast<double>(before[i]) - after[i]);
    if (slack > 0.0) {
      out.loss += slack;
      out.grad_after[i] += 1.0;
    }
  }
  for (Index i : unaffected) {
    if (i >= after.size()) throw ContractViolation("unaffected item out of range");
    const double slack = margin - (static_cast<double>(after[i]) - before[i]);
    if (slack > 0.0) {
      out.loss += slack;
      out.grad_after[i] -= 1.0;
    }
  }
  return out;
}

template MarginLoss max_margin_loss(std::span<const float>, std::span<const float>,
                                    std::span<const Index>, std::span<const Index>,
                                    double);
template MarginLoss max_margin_loss(std::span<const double>, std::span<const double>,
                                    std::span<const Index>, std::span<const Index>,
                                    double);

}  // namespace critiq
