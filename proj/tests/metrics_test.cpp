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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "critiq/error.hpp"
#include "critiq/eval/metrics.hpp"
#include "support/oracles.hpp"

namespace critiq {
namespace {

using V = std::vector<Index>;

TEST(Metrics, HandExamples) {
  EXPECT_DOUBLE_EQ(ndcg(V{3, 1, 2}, V{3, 1}), 1.0);
  EXPECT_NEAR(ndcg(V{0, 1}, V{1}), 1.0 / std::log2(3.0), 1e-12);
  EXPECT_NEAR(ndcg(V{0, 1}, V{1}), 0.6309, 1e-4);

  const V ranking{4, 5, 6, 7, 8};
  EXPECT_DOUBLE_EQ(precision_at(ranking, V{4, 5}, 2), 1.0);
  EXPECT_DOUBLE_EQ(recall_at(ranking, V{4, 5, 6, 9}, 2), 0.5);
  EXPECT_DOUBLE_EQ(recall_at(ranking, V{4}, 2), 1.0);
  EXPECT_EQ(precision_at(ranking, V{1, 2}, 3), 0.0);
  EXPECT_EQ(recall_at(ranking, V{1, 2}, 3), 0.0);
  EXPECT_EQ(map_at(ranking, V{1, 2}, 3), 0.0);
  // hits at ranks 1 and 3: (1/1 + 2/3) / 2
  EXPECT_NEAR(map_at(ranking, V{4, 6}, 5), (1.0 + 2.0 / 3.0) / 2.0, 1e-12);
  EXPECT_DOUBLE_EQ(r_precision(ranking, V{5, 8}), 0.5);
}

TEST(Metrics, EmptyRelevantSetAndZeroCutoffAreRejected) {
  EXPECT_THROW(ndcg(V{1}, V{}), ContractViolation);
  EXPECT_THROW(map_at(V{1}, V{}, 3), ContractViolation);
  EXPECT_THROW(precision_at(V{1}, V{1}, 0), ContractViolation);
}

TEST(Metrics, FMapSign) {
  const V before{0, 1, 2, 3, 4, 5};
  EXPECT_EQ(f_map(before, before, V{0, 3}, 5), 0.0);
  const V after{1, 2, 3, 4, 5, 0};
  EXPECT_GT(f_map(before, after, V{0}, 5), 0.0);
  EXPECT_LT(f_map(after, before, V{0}, 5), 0.0);
}

TEST(Metrics, ExhaustiveOracleAgreement) {
  const auto sweep = oracle::exhaustive_metric_sweep(10);
  EXPECT_GT(sweep.instances, 6000u);
  EXPECT_LE(sweep.max_error, 1e-12);
}

TEST(Metrics, ExhaustiveFMapAgreement) {
  const auto sweep = oracle::exhaustive_fmap_sweep(4);
  EXPECT_GT(sweep.instances, 0u);
  EXPECT_LE(sweep.max_error, 1e-12);
}

TEST(Metrics, RandomLargerInstances) {
  const auto sweep = oracle::random_metric_sweep(1000, 5);
  EXPECT_EQ(sweep.instances, 1000u);
  EXPECT_LE(sweep.max_error, 1e-12);
}

TEST(Metrics, NdcgMatchesBruteForceIdeal) {
  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    V items{0, 1, 2, 3, 4, 5, 6, 7};
    std::shuffle(items.begin(), items.end(), rng);
    V relevant;
    for (Index i = 0; i < 8; ++i) {
      if (std::bernoulli_distribution(0.4)(rng)) relevant.push_back(i);
    }
    if (relevant.empty()) relevant.push_back(items[7]);
    const std::size_t len = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
    const V ranking(items.begin(), items.begin() + len);
    EXPECT_NEAR(ndcg(ranking, relevant), oracle::ndcg_brute_force(ranking, relevant), 1e-12);
  }
}

TEST(Metrics, DuplicateRelevantEntriesCountOnce) {
  EXPECT_DOUBLE_EQ(recall_at(V{1, 2}, V{1, 1, 3}, 2), 0.5);
  EXPECT_DOUBLE_EQ(ndcg(V{1, 3}, V{3, 1, 1}), 1.0);
}

TEST(Metrics, RankingMetricsUsesStandardCutoffs) {
  V ranking(30);
  std::iota(ranking.begin(), ranking.end(), 0);
  const auto m = ranking_metrics(ranking, V{0, 7, 15});
  EXPECT_DOUBLE_EQ(m.precision[0], 1.0 / 5);
  EXPECT_DOUBLE_EQ(m.precision[1], 2.0 / 10);
  EXPECT_DOUBLE_EQ(m.recall[2], 1.0);
}

}  // namespace
}  // namespace critiq
