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

#include "critiq/model/inference.hpp"

#include <algorithm>

#include "critiq/error.hpp"

namespace critiq {
namespace {

bool ranks_before(const ScoredIndex& a, const ScoredIndex& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.index < b.index;
}

std::vector<ScoredIndex> order(std::vector<ScoredIndex> entries,
                               std::size_t top_k) {
  if (top_k == 0 || top_k >= entries.size()) {
    std::sort(entries.begin(), entries.end(), ranks_before);
  } else {
    std::partial_sort(entries.begin(), entries.begin() + top_k, entries.end(),
                      ranks_before);
    entries.resize(top_k);
  }
  return entries;
}

}  // namespace

std::vector<ScoredIndex> rank_scores(std::span<const float> scores,
                                     std::span<const Index> exclude,
                                     std::size_t top_k) {
  std::vector<ScoredIndex> entries;
  entries.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const auto idx = static_cast<Index>(i);
    if (sorted_contains(exclude, idx)) continue;
    entries.push_back({idx, scores[i]});
  }
  return order(std::move(entries), top_k);
}

std::vector<ScoredIndex> rank_candidates(std::span<const float> scores,
                                         std::span<const Index> candidates) {
  std::vector<ScoredIndex> entries;
  entries.reserve(candidates.size());
  for (Index i : candidates) {
    if (i >= scores.size()) throw ContractViolation("candidate out of range");
    entries.push_back({i, scores[i]});
  }
  return order(std::move(entries), 0);
}

std::vector<float> latent_mean(const MmvaeModel<float>& model, OptionalRow r,
                               OptionalRow k) {
  return encode(model, r, k).mean();
}

std::vector<float> decode(const MmvaeModel<float>& model, Modality m,
                          std::span<const float> z) {
  const auto& dec = model.decoder(m);
  if (z.size() != dec.in_dim()) {
    throw ContractViolation("decode: latent dimension mismatch");
  }
  const Matrix<float> input(1, z.size(), std::vector<float>(z.begin(), z.end()));
  const auto out = dec.predict(input);
  return {out.values().begin(), out.values().end()};
}

std::vector<ScoredIndex> recommend(const MmvaeModel<float>& model,
                                   OptionalRow r, OptionalRow k,
                                   std::span<const Index> exclude,
                                   std::size_t top_n) {
  const auto z = latent_mean(model, r, k);
  return rank_scores(decode(model, Modality::kInteractions, z), exclude, top_n);
}

std::vector<ScoredIndex> explain(const MmvaeModel<float>& model, OptionalRow r,
                                 OptionalRow k, std::size_t top_k) {
  const auto z = latent_mean(model, r, k);
  return rank_scores(decode(model, Modality::kKeyphrases, z), {}, top_k);
}

}  // namespace critiq
