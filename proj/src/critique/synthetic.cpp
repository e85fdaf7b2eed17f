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

#include "critiq/critique/synthetic.hpp"

#include <algorithm>

#include "critiq/error.hpp"
#include "critiq/model/inference.hpp"

namespace critiq {

SyntheticSet build_synthetic_dataset(const SparseBinaryMatrix& r_val,
                                     const SparseBinaryMatrix& k_item, Rng& rng,
                                     const std::vector<IndexList>* universe) {
  if (r_val.n_cols() != k_item.n_rows()) {
    throw ContractViolation("validation matrix and item keyphrases disagree on items");
  }
  if (universe != nullptr && universe->size() != r_val.n_rows()) {
    throw ContractViolation("restriction list must have one entry per user");
  }
  const std::size_t n_items = k_item.n_rows();
  const std::size_t n_k = k_item.n_cols();
  // Items carrying each keyphrase.
  const SparseBinaryMatrix carriers = k_item.transpose();

  IndexList all_items(n_items);
  for (std::size_t i = 0; i < n_items; ++i) all_items[i] = static_cast<Index>(i);

  SyntheticSet out;
  for (std::size_t u = 0; u < r_val.n_rows(); ++u) {
    const std::span<const Index> pool =
        universe != nullptr ? std::span<const Index>((*universe)[u]) : all_items;
    for (Index item : r_val.row(u)) {
      const auto own = k_item.row(item);
      if (own.size() == n_k) {
        ++out.skipped;
        continue;
      }
      IndexList candidates;
      candidates.reserve(n_k - own.size());
      for (Index c = 0; c < n_k; ++c) {
        if (!sorted_contains(own, c)) candidates.push_back(c);
      }
      std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
      const Index c = candidates[pick(rng)];

      SyntheticExample ex{static_cast<Index>(u), item, c, {}, {}};
      const auto with_c = carriers.row(c);
      for (Index i : pool) {
        (sorted_contains(with_c, i) ? ex.affected : ex.unaffected).push_back(i);
      }
      out.examples.push_back(std::move(ex));
    }
  }
  return out;
}

std::vector<IndexList> top_items_per_user(const MmvaeModel<float>& model,
                                          const SparseBinaryMatrix& r_train,
                                          std::size_t n) {
  std::vector<IndexList> out(r_train.n_rows());
  for (std::size_t u = 0; u < r_train.n_rows(); ++u) {
    const auto r = r_train.row(u);
    if (r.empty()) continue;
    const auto ranked = recommend(model, r, std::nullopt, {}, n);
    for (const auto& s : ranked) out[u].push_back(s.index);
    std::sort(out[u].begin(), out[u].end());
  }
  return out;
}

}  // namespace critiq
