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
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "critiq/data/id_map.hpp"
#include "critiq/data/sparse_matrix.hpp"

namespace critiq {

struct Interaction {
  Index user;
  Index item;
  double rating;
};

// Raw rating table plus the binarized positive matrix.
struct InteractionTable {
  std::vector<Interaction> records;
  IdMap users;
  IdMap items;
  double threshold = 0.0;
  SparseBinaryMatrix positives;  // |U| x |I|, rating > threshold
};

struct SplitRatios {
  double train = 0.6;
  double val = 0.2;
  double test = 0.2;
};

struct Dataset {
  SparseBinaryMatrix r_train;
  SparseBinaryMatrix r_val;
  SparseBinaryMatrix r_test;
  SparseBinaryMatrix k_user;  // |U| x |K|
  SparseBinaryMatrix k_item;  // |I| x |K|
  IdMap users;
  IdMap items;
  IdMap keyphrases;

  // Provenance for bundle round trips.
  std::vector<Interaction> records;
  double threshold = 0.0;
  std::uint64_t seed = 0;
  SplitRatios ratios;

  std::size_t n_users() const { return users.size(); }
  std::size_t n_items() const { return items.size(); }
  std::size_t n_keyphrases() const { return keyphrases.size(); }

  // Throws ValidationError if shapes disagree or splits overlap.
  void validate() const;
};

// Per-user observation flags used to simulate weak supervision.
struct ModalityFlags {
  bool r_observed = true;
  bool k_observed = true;
};
using ModalityMask = std::vector<ModalityFlags>;

ModalityMask full_mask(std::size_t n_users);

// `fully_observed_fraction` of users keep both modalities; the rest are split
// evenly into r-only and k-only (r-only takes the odd one out).
ModalityMask apply_modality_mask(std::size_t n_users,
                                 double fully_observed_fraction,
                                 std::uint64_t seed);

enum class KeyphraseAxis { kUser, kItem };

// Reads `user<sep>item<sep>rating` lines (tab or comma). Ids seen first in
// `users`/`items` keep their indices; new ids are appended.
InteractionTable load_interactions(const std::filesystem::path& path,
                                   double threshold, IdMap users = {},
                                   IdMap items = {});

// Reads `row_id<TAB>label[<TAB>1]` triplets. Row ids must exist in `rows`;
// unseen labels are appended to `labels`. The result has labels.size()
// columns at return time.
SparseBinaryMatrix load_keyphrases(const std::filesystem::path& path,
                                   const IdMap& rows, IdMap& labels);

// Per-user random partition of positives. Users with fewer than three
// positives go entirely to train.
Dataset split_dataset(const InteractionTable& table,
                      const SplitRatios& ratios, std::uint64_t seed);

// Clustered synthetic data for tests and demos.
Dataset generate_toy_dataset(std::size_t n_users, std::size_t n_items,
                             std::size_t n_keyphrases, std::size_t n_clusters,
                             std::uint64_t seed);

// Cluster membership the toy generator used; index i is user/item i.
struct ToyClusters {
  std::vector<std::size_t> user_cluster;
  std::vector<std::size_t> item_cluster;
  std::vector<std::size_t> keyphrase_cluster;
};
ToyClusters toy_clusters(std::size_t n_users, std::size_t n_items,
                         std::size_t n_keyphrases, std::size_t n_clusters,
                         std::uint64_t seed);

// Directory bundle: interactions.tsv, user_keyphrases.tsv,
// item_keyphrases.tsv, meta.json.
void save_bundle(const Dataset& dataset, const std::filesystem::path& dir);
Dataset load_bundle(const std::filesystem::path& dir);

// Union of the keyphrases of each user's training items.
SparseBinaryMatrix derive_user_keyphrases(const SparseBinaryMatrix& r_train,
                                          const SparseBinaryMatrix& k_item);

struct IngestOptions {
  std::filesystem::path interactions;
  std::filesystem::path item_keyphrases;
  // Derived from training items when absent.
  std::optional<std::filesystem::path> user_keyphrases;
  double threshold = 3.5;
  SplitRatios ratios;
  std::uint64_t seed = 1;
};

// Raw files to a split dataset.
Dataset ingest_dataset(const IngestOptions& options);

// Items a user has interacted with in any split.
IndexList all_positives(const Dataset& dataset, Index user);

}  // namespace critiq
