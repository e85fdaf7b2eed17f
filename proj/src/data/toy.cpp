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
#include <numeric>
#include <random>
#include <string>

#include "critiq/data/dataset.hpp"
#include "critiq/error.hpp"

namespace critiq {
namespace {

constexpr double kInClusterProbability = 0.9;
constexpr double kCrossKeyphraseProbability = 0.25;
constexpr std::size_t kMinPositives = 10;
constexpr std::size_t kMaxPositives = 20;
constexpr std::size_t kNegativesPerUser = 3;
constexpr double kToyThreshold = 3.5;

std::vector<std::size_t> balanced_assignment(std::size_t n,
                                             std::size_t n_clusters,
                                             std::mt19937_64& rng) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> cluster(n);
  for (std::size_t pos = 0; pos < n; ++pos) cluster[order[pos]] = pos % n_clusters;
  return cluster;
}

std::string padded(char prefix, std::size_t i) {
  std::string digits = std::to_string(i);
  if (digits.size() < 3) digits.insert(0, 3 - digits.size(), '0');
  return std::string(1, prefix) + digits;
}

}  // namespace

ToyClusters toy_clusters(std::size_t n_users, std::size_t n_items,
                         std::size_t n_keyphrases, std::size_t n_clusters,
                         std::uint64_t seed) {
  if (n_clusters == 0 ||
      n_clusters > std::min({n_users, n_items, n_keyphrases})) {
    throw ContractViolation(
        "n_clusters must be in [1, min(n_users, n_items, n_keyphrases)]");
  }
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  ToyClusters c;
  c.user_cluster = balanced_assignment(n_users, n_clusters, rng);
  c.item_cluster = balanced_assignment(n_items, n_clusters, rng);
  c.keyphrase_cluster.resize(n_keyphrases);
  for (std::size_t k = 0; k < n_keyphrases; ++k) {
    c.keyphrase_cluster[k] = k % n_clusters;
  }
  return c;
}

Dataset generate_toy_dataset(std::size_t n_users, std::size_t n_items,
                             std::size_t n_keyphrases, std::size_t n_clusters,
                             std::uint64_t seed) {
  const ToyClusters clusters =
      toy_clusters(n_users, n_items, n_keyphrases, n_clusters, seed);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<IndexList> cluster_items(n_clusters), cluster_keyphrases(n_clusters);
  for (std::size_t i = 0; i < n_items; ++i) {
    cluster_items[clusters.item_cluster[i]].push_back(static_cast<Index>(i));
  }
  for (std::size_t k = 0; k < n_keyphrases; ++k) {
    cluster_keyphrases[clusters.keyphrase_cluster[k]].push_back(
        static_cast<Index>(k));
  }

  // Item keyphrases: two from the item's own cluster, sometimes one stray.
  std::vector<std::pair<Index, Index>> item_kp;
  for (std::size_t i = 0; i < n_items; ++i) {
    IndexList own = cluster_keyphrases[clusters.item_cluster[i]];
    std::shuffle(own.begin(), own.end(), rng);
    const std::size_t take = std::min<std::size_t>(2, own.size());
    for (std::size_t j = 0; j < take; ++j) {
      item_kp.emplace_back(static_cast<Index>(i), own[j]);
    }
    if (n_clusters > 1 && unit(rng) < kCrossKeyphraseProbability) {
      std::uniform_int_distribution<std::size_t> pick(0, n_keyphrases - 1);
      Index k = static_cast<Index>(pick(rng));
      while (clusters.keyphrase_cluster[k] == clusters.item_cluster[i]) {
        k = static_cast<Index>(pick(rng));
      }
      item_kp.emplace_back(static_cast<Index>(i), k);
    }
  }
  const auto k_item =
      SparseBinaryMatrix::from_pairs(n_items, n_keyphrases, item_kp);

  InteractionTable table;
  table.threshold = kToyThreshold;
  for (std::size_t u = 0; u < n_users; ++u) table.users.intern(padded('u', u));
  for (std::size_t i = 0; i < n_items; ++i) table.items.intern(padded('i', i));

  std::uniform_int_distribution<std::size_t> n_pos_dist(
      kMinPositives, std::min(kMaxPositives, n_items));
  std::uniform_int_distribution<int> pos_rating(4, 5);
  std::uniform_int_distribution<int> neg_rating(1, 3);

  for (std::size_t u = 0; u < n_users; ++u) {
    const std::size_t cu = clusters.user_cluster[u];
    // Each user favours two of its cluster's keyphrases.
    IndexList liked = cluster_keyphrases[cu];
    std::shuffle(liked.begin(), liked.end(), rng);
    liked.resize(std::min<std::size_t>(2, liked.size()));
    std::sort(liked.begin(), liked.end());

    std::vector<double> in_weight(cluster_items[cu].size());
    for (std::size_t j = 0; j < in_weight.size(); ++j) {
      std::size_t shared = 0;
      for (Index k : k_item.row(cluster_items[cu][j])) {
        shared += sorted_contains(liked, k) ? 1 : 0;
      }
      in_weight[j] = 1.0 + 2.0 * static_cast<double>(shared);
    }

    const std::size_t n_pos = n_pos_dist(rng);
    std::vector<bool> taken(n_items, false);
    std::size_t drawn = 0;
    std::size_t attempts = 0;
    while (drawn < n_pos && attempts < 100 * n_pos) {
      ++attempts;
      Index item;
      if (n_clusters == 1 || unit(rng) < kInClusterProbability) {
        std::discrete_distribution<std::size_t> pick(in_weight.begin(),
                                                     in_weight.end());
        item = cluster_items[cu][pick(rng)];
      } else {
        std::uniform_int_distribution<std::size_t> pick(0, n_items - 1);
        item = static_cast<Index>(pick(rng));
        if (clusters.item_cluster[item] == cu) continue;
      }
      if (taken[item]) continue;
      taken[item] = true;
      ++drawn;
      table.records.push_back({static_cast<Index>(u), item,
                               static_cast<double>(pos_rating(rng))});
    }
    std::uniform_int_distribution<std::size_t> any(0, n_items - 1);
    for (std::size_t n = 0, tries = 0; n < kNegativesPerUser && tries < 1000;
         ++tries) {
      const auto item = static_cast<Index>(any(rng));
      if (taken[item]) continue;
      taken[item] = true;
      ++n;
      table.records.push_back({static_cast<Index>(u), item,
                               static_cast<double>(neg_rating(rng))});
    }
  }

  std::vector<std::pair<Index, Index>> pairs;
  for (const auto& rec : table.records) {
    if (rec.rating > table.threshold) pairs.emplace_back(rec.user, rec.item);
  }
  table.positives = SparseBinaryMatrix::from_pairs(n_users, n_items, pairs);

  Dataset ds = split_dataset(table, SplitRatios{}, seed);
  for (std::size_t k = 0; k < n_keyphrases; ++k) {
    ds.keyphrases.intern("kp" + std::to_string(k));
  }
  ds.k_item = k_item;
  ds.k_user = derive_user_keyphrases(ds.r_train, ds.k_item);
  return ds;
}

}  // namespace critiq
