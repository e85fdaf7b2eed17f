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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <spdlog/spdlog.h>

#include "critiq/data/dataset.hpp"
#include "critiq/error.hpp"

namespace critiq {
namespace {

std::size_t share(std::size_t n, double ratio) {
  if (ratio <= 0.0) return 0;
  return std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(static_cast<double>(n) * ratio)));
}

}  // namespace

void Dataset::validate() const {
  const std::size_t nu = users.size();
  const std::size_t ni = items.size();
  const std::size_t nk = keyphrases.size();
  for (const auto* m : {&r_train, &r_val, &r_test}) {
    if (m->n_rows() != nu || m->n_cols() != ni) {
      throw ValidationError("interaction split shape mismatch");
    }
  }
  if (k_user.n_rows() != nu || k_user.n_cols() != nk) {
    throw ValidationError("user-keyphrase shape mismatch");
  }
  if (k_item.n_rows() != ni || k_item.n_cols() != nk) {
    throw ValidationError("item-keyphrase shape mismatch");
  }
  for (std::size_t u = 0; u < nu; ++u) {
    for (Index i : r_val.row(u)) {
      if (r_train.contains(u, i)) {
        throw ValidationError("train/val overlap at user " +
                              std::to_string(u));
      }
    }
    for (Index i : r_test.row(u)) {
      if (r_train.contains(u, i) || r_val.contains(u, i)) {
        throw ValidationError("test overlaps train/val at user " +
                              std::to_string(u));
      }
    }
  }
}

Dataset split_dataset(const InteractionTable& table, const SplitRatios& ratios,
                      std::uint64_t seed) {
  const double total = ratios.train + ratios.val + ratios.test;
  if (std::abs(total - 1.0) > 1e-9 || ratios.train <= 0.0 || ratios.val < 0.0 ||
      ratios.test < 0.0) {
    throw ValidationError("split ratios must be non-negative and sum to 1");
  }

  const std::size_t nu = table.users.size();
  std::vector<IndexList> train(nu), val(nu), test(nu);
  std::mt19937_64 rng(seed);
  std::size_t small_users = 0;

  for (std::size_t u = 0; u < nu; ++u) {
    IndexList items(table.positives.row(u).begin(),
                    table.positives.row(u).end());
    const std::size_t n = items.size();
    if (n < 3) {
      if (n > 0) ++small_users;
      train[u] = std::move(items);
      continue;
    }
    std::shuffle(items.begin(), items.end(), rng);
    std::size_t n_val = share(n, ratios.val);
    std::size_t n_test = share(n, ratios.test);
    while (n_val + n_test >= n) {
      if (n_test >= n_val && n_test > 0) {
        --n_test;
      } else {
        --n_val;
      }
    }
    const std::size_t n_train = n - n_val - n_test;
    train[u].assign(items.begin(), items.begin() + n_train);
    val[u].assign(items.begin() + n_train, items.begin() + n_train + n_val);
    test[u].assign(items.begin() + n_train + n_val, items.end());
    for (auto* part : {&train[u], &val[u], &test[u]}) {
      std::sort(part->begin(), part->end());
    }
  }
  if (small_users > 0) {
    spdlog::warn("{} users have fewer than 3 positives; kept entirely in train",
                 small_users);
  }

  Dataset ds;
  const std::size_t ni = table.items.size();
  ds.r_train = SparseBinaryMatrix(ni, std::move(train));
  ds.r_val = SparseBinaryMatrix(ni, std::move(val));
  ds.r_test = SparseBinaryMatrix(ni, std::move(test));
  ds.k_user = SparseBinaryMatrix(nu, 0);
  ds.k_item = SparseBinaryMatrix(ni, 0);
  ds.users = table.users;
  ds.items = table.items;
  ds.records = table.records;
  ds.threshold = table.threshold;
  ds.seed = seed;
  ds.ratios = ratios;
  return ds;
}

ModalityMask full_mask(std::size_t n_users) {
  return ModalityMask(n_users, ModalityFlags{true, true});
}

ModalityMask apply_modality_mask(std::size_t n_users,
                                 double fully_observed_fraction,
                                 std::uint64_t seed) {
  if (!(fully_observed_fraction >= 0.0 && fully_observed_fraction <= 1.0)) {
    throw ContractViolation("fully_observed_fraction must lie in [0, 1]");
  }
  std::vector<std::size_t> order(n_users);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  const auto n_full = static_cast<std::size_t>(
      std::llround(fully_observed_fraction * static_cast<double>(n_users)));
  const std::size_t n_partial = n_users - n_full;
  const std::size_t n_r_only = (n_partial + 1) / 2;

  ModalityMask mask(n_users);
  for (std::size_t pos = 0; pos < n_users; ++pos) {
    auto& flags = mask[order[pos]];
    if (pos < n_full) {
      flags = {true, true};
    } else if (pos < n_full + n_r_only) {
      flags = {true, false};
    } else {
      flags = {false, true};
    }
  }
  return mask;
}

IndexList all_positives(const Dataset& dataset, Index user) {
  auto out = set_union(dataset.r_train.row(user), dataset.r_val.row(user));
  return set_union(out, dataset.r_test.row(user));
}

}  // namespace critiq
