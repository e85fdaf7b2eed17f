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

#include "critiq/model/mmvae.hpp"

namespace critiq {

struct ScoredIndex {
  Index index;
  double score;

  bool operator==(const ScoredIndex&) const = default;
};

// Descending by score, ties by ascending index. `exclude` must be sorted.
// top_k == 0 keeps everything.
std::vector<ScoredIndex> rank_scores(std::span<const float> scores,
                                     std::span<const Index> exclude = {},
                                     std::size_t top_k = 0);

// Same ordering restricted to `candidates`.
std::vector<ScoredIndex> rank_candidates(std::span<const float> scores,
                                         std::span<const Index> candidates);

// Posterior mean of the mixture (no sampling).
std::vector<float> latent_mean(const MmvaeModel<float>& model, OptionalRow r,
                               OptionalRow k);

// Decoder logits for a single latent vector.
std::vector<float> decode(const MmvaeModel<float>& model, Modality m,
                          std::span<const float> z);

std::vector<ScoredIndex> recommend(const MmvaeModel<float>& model,
                                   OptionalRow r, OptionalRow k,
                                   std::span<const Index> exclude,
                                   std::size_t top_n = 0);

std::vector<ScoredIndex> explain(const MmvaeModel<float>& model, OptionalRow r,
                                 OptionalRow k, std::size_t top_k);

}  // namespace critiq
