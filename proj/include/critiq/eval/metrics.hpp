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

#include <array>
#include <span>

#include "critiq/data/sparse_matrix.hpp"

namespace critiq {

// All functions take a ranking (best first) and a relevant set in any
// order, and throw ContractViolation when the relevant set is empty.

// Binary-relevance NDCG over the whole ranking, gain 1/log2(rank + 1).
double ndcg(std::span<const Index> ranking, std::span<const Index> relevant);
double precision_at(std::span<const Index> ranking, std::span<const Index> relevant,
                    std::size_t n);
// hits in the top n divided by |relevant|.
double recall_at(std::span<const Index> ranking, std::span<const Index> relevant,
                 std::size_t n);
// Average precision over the top n, normalized by min(n, |relevant|).
double map_at(std::span<const Index> ranking, std::span<const Index> relevant,
              std::size_t n);
// Precision at |relevant|.
double r_precision(std::span<const Index> ranking, std::span<const Index> relevant);

// MAP@n of `affected` before minus after; positive when affected items fell.
double f_map(std::span<const Index> before, std::span<const Index> after,
             std::span<const Index> affected, std::size_t n);

inline constexpr std::array<std::size_t, 3> kCutoffs = {5, 10, 20};

struct RankingMetrics {
  double r_precision = 0.0;
  double ndcg = 0.0;
  std::array<double, 3> map{};
  std::array<double, 3> precision{};
  std::array<double, 3> recall{};

  void add(const RankingMetrics& other);
  void scale(double factor);
};

RankingMetrics ranking_metrics(std::span<const Index> ranking,
                               std::span<const Index> relevant);

}  // namespace critiq
