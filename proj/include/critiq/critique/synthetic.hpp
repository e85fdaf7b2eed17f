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

#include <vector>

#include "critiq/data/dataset.hpp"
#include "critiq/model/mmvae.hpp"

namespace critiq {

// One self-supervised critique: user u, held-out item i, keyphrase c not on
// i, items carrying c (affected) and the rest (unaffected).
struct SyntheticExample {
  Index user;
  Index item;
  Index critique;
  IndexList affected;
  IndexList unaffected;

  bool operator==(const SyntheticExample&) const = default;
};

struct SyntheticSet {
  std::vector<SyntheticExample> examples;
  std::size_t skipped = 0;  // items carrying every keyphrase
};

// For each user and each validation positive, samples a critique uniformly
// from the keyphrases the item lacks. When `universe` is given, the affected
// and unaffected sets are restricted to universe[user] (sorted).
SyntheticSet build_synthetic_dataset(const SparseBinaryMatrix& r_val,
                                     const SparseBinaryMatrix& k_item, Rng& rng,
                                     const std::vector<IndexList>* universe = nullptr);

// Each user's top `n` items by initial score from the interaction expert.
// Users without training interactions get an empty list.
std::vector<IndexList> top_items_per_user(const MmvaeModel<float>& model,
                                          const SparseBinaryMatrix& r_train,
                                          std::size_t n);

}  // namespace critiq
