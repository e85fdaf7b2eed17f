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

#include "critiq/eval/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "critiq/error.hpp"

namespace critiq {
namespace {

IndexList as_set(std::span<const Index> relevant) {
  if (relevant.empty()) throw ContractViolation("relevant set is empty");
  IndexList s(relevant.begin(), relevant.end());
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

std::size_t hits_at(std::span<const Index> ranking, const IndexList& rel,
                    std::size_t n) {
  std::size_t hits = 0;
  const std::size_t end = std::min(n, ranking.size());
  for (std::size_t k = 0; k < end; ++k) hits += sorted_contains(rel, ranking[k]);
  return hits;
}

}  // namespace

double ndcg(std::span<const Index> ranking, std::span<const Index> relevant) {
  const auto rel = as_set(relevant);
  double dcg = 0.0;
  for (std::size_t k = 0; k < ranking.size(); ++k) {
    if (sorted_contains(rel, ranking[k])) dcg += 1.0 / std::log2(k + 2.0);
  }
  double ideal = 0.0;
  for (std::size_t k = 0; k < rel.size(); ++k) ideal += 1.0 / std::log2(k + 2.0);
  return dcg / ideal;
}

double precision_at(std::span<const Index> ranking, std::span<const Index> relevant,
                    std::size_t n) {
  if (n == 0) throw ContractViolation("cutoff must be positive");
  const auto rel = as_set(relevant);
  return static_cast<double>(hits_at(ranking, rel, n)) / static_cast<double>(n);
}

double recall_at(std::span<const Index> ranking, std::span<const Index> relevant,
                 std::size_t n) {
  const auto rel = as_set(relevant);
  return static_cast<double>(hits_at(ranking, rel, n)) / static_cast<double>(rel.size());
}

double map_at(std::span<const Index> ranking, std::span<const Index> relevant,
              std::size_t n) {
  if (n == 0) throw ContractViolation("cutoff must be positive");
  const auto rel = as_set(relevant);
  double sum = 0.0;
  std::size_t hits = 0;
  const std::size_t end = std::min(n, ranking.size());
  for (std::size_t k = 0; k < end; ++k) {
    if (sorted_contains(rel, ranking[k])) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(k + 1);
    }
  }
  return sum / static_cast<double>(std::min(n, rel.size()));
}

double r_precision(std::span<const Index> ranking, std::span<const Index> relevant) {
  const auto rel = as_set(relevant);
  return static_cast<double>(hits_at(ranking, rel, rel.size())) /
         static_cast<double>(rel.size());
}

double f_map(std::span<const Index> before, std::span<const Index> after,
             std::span<const Index> affected, std::size_t n) {
  return map_at(before, affected, n) - map_at(after, affected, n);
}

void RankingMetrics::add(const RankingMetrics& o) {
  r_precision += o.r_precision;
  ndcg += o.ndcg;
  for (std::size_t c = 0; c < kCutoffs.size(); ++c) {
    map[c] += o.map[c];
    precision[c] += o.precision[c];
    recall[c] += o.recall[c];
  }
}

void RankingMetrics::scale(double f) {
  r_precision *= f;
  ndcg *= f;
  for (std::size_t c = 0; c < kCutoffs.size(); ++c) {
    map[c] *= f;
    precision[c] *= f;
    recall[c] *= f;
  }
}

RankingMetrics ranking_metrics(std::span<const Index> ranking,
                               std::span<const Index> relevant) {
  RankingMetrics m;
  m.r_precision = r_precision(ranking, relevant);
  m.ndcg = ndcg(ranking, relevant);
  for (std::size_t c = 0; c < kCutoffs.size(); ++c) {
    m.map[c] = map_at(ranking, relevant, kCutoffs[c]);
    m.precision[c] = precision_at(ranking, relevant, kCutoffs[c]);
    m.recall[c] = recall_at(ranking, relevant, kCutoffs[c]);
  }
  return m;
}

}  // namespace critiq
