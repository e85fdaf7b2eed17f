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

struct MarginLoss {
  double loss = 0.0;
  std::vector<double> grad_after;  // dL/d(after score), one entry per item
};

//   sum_{i in affected}   max(0, h - (before_i - after_i))
// + sum_{i in unaffected} max(0, h - (after_i - before_i))
// Throws ContractViolation unless margin > 0.
template <typename T>
MarginLoss max_margin_loss(std::span<const T> before, std::span<const T> after,
                           std::span<const Index> affected,
                           std::span<const Index> unaffected, double margin);

}  // namespace critiq
