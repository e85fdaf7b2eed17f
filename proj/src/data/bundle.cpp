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

#include <fstream>
#include <iomanip>
#include <limits>

#include <json.hpp>

#include "critiq/data/dataset.hpp"
#include "critiq/error.hpp"

namespace critiq {
namespace {

constexpr const char* kBundleFormat = "critiq-bundle-1";

void write_keyphrases(const std::filesystem::path& path,
                      const SparseBinaryMatrix& m, const IdMap& rows,
                      const IdMap& labels) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (std::size_t r = 0; r < m.n_rows(); ++r) {
    for (Index c : m.row(r)) {
      out << rows.id_of(static_cast<Index>(r)) << '\t' << labels.id_of(c)
          << '\n';
    }
  }
}

}  // namespace

void save_bundle(const Dataset& dataset, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "interactions.tsv");
    if (!out) throw std::runtime_error("cannot write " + dir.string());
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (const auto& rec : dataset.records) {
      out << dataset.users.id_of(rec.user) << '\t'
          << dataset.items.id_of(rec.item) << '\t' << rec.rating << '\n';
    }
  }
  write_keyphrases(dir / "user_keyphrases.tsv", dataset.k_user, dataset.users,
                   dataset.keyphrases);
  write_keyphrases(dir / "item_keyphrases.tsv", dataset.k_item, dataset.items,
                   dataset.keyphrases);

  nlohmann::json meta;
  meta["format"] = kBundleFormat;
  meta["dims"] = {{"users", dataset.n_users()},
                  {"items", dataset.n_items()},
                  {"keyphrases", dataset.n_keyphrases()}};
  meta["threshold"] = dataset.threshold;
  meta["seed"] = dataset.seed;
  meta["split_ratios"] = {dataset.ratios.train, dataset.ratios.val,
                          dataset.ratios.test};
  meta["users"] = dataset.users.ids();
  meta["items"] = dataset.items.ids();
  meta["keyphrases"] = dataset.keyphrases.ids();
  std::ofstream out(dir / "meta.json");
  out << meta.dump(2) << '\n';
}

Dataset load_bundle(const std::filesystem::path& dir) {
  std::ifstream meta_in(dir / "meta.json");
  if (!meta_in) {
    throw std::runtime_error("missing " + (dir / "meta.json").string());
  }
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(meta_in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("meta.json: " + std::string(e.what()));
  }
  if (meta.value("format", "") != kBundleFormat) {
    throw ValidationError("meta.json: unsupported bundle format");
  }

  const auto ratios_json = meta.at("split_ratios");
  const SplitRatios ratios{ratios_json.at(0).get<double>(),
                           ratios_json.at(1).get<double>(),
                           ratios_json.at(2).get<double>()};
  const double threshold = meta.at("threshold").get<double>();
  const auto seed = meta.at("seed").get<std::uint64_t>();

  IdMap users(meta.value("users", std::vector<std::string>{}));
  IdMap items(meta.value("items", std::vector<std::string>{}));
  IdMap labels(meta.value("keyphrases", std::vector<std::string>{}));

  const InteractionTable table = load_interactions(
      dir / "interactions.tsv", threshold, std::move(users), std::move(items));
  Dataset ds = split_dataset(table, ratios, seed);

  const auto k_item = load_keyphrases(dir / "item_keyphrases.tsv", ds.items, labels);
  const auto k_user = load_keyphrases(dir / "user_keyphrases.tsv", ds.users, labels);
  ds.k_item = k_item.widened(labels.size());
  ds.k_user = k_user.widened(labels.size());
  ds.keyphrases = std::move(labels);

  const auto& dims = meta.at("dims");
  if (dims.at("users").get<std::size_t>() != ds.n_users() ||
      dims.at("items").get<std::size_t>() != ds.n_items() ||
      dims.at("keyphrases").get<std::size_t>() != ds.n_keyphrases()) {
    throw ValidationError("bundle dims disagree with meta.json");
  }
  ds.validate();
  return ds;
}

SparseBinaryMatrix derive_user_keyphrases(const SparseBinaryMatrix& r_train,
                                          const SparseBinaryMatrix& k_item) {
  std::vector<IndexList> rows(r_train.n_rows());
  for (std::size_t u = 0; u < r_train.n_rows(); ++u) {
    for (Index i : r_train.row(u)) rows[u] = set_union(rows[u], k_item.row(i));
  }
  return SparseBinaryMatrix(k_item.n_cols(), std::move(rows));
}

Dataset ingest_dataset(const IngestOptions& options) {
  const InteractionTable table = load_interactions(options.interactions, options.threshold);
  Dataset ds = split_dataset(table, options.ratios, options.seed);
  IdMap labels;
  const auto k_item = load_keyphrases(options.item_keyphrases, ds.items, labels);
  if (options.user_keyphrases) {
    const auto k_user = load_keyphrases(*options.user_keyphrases, ds.users, labels);
    ds.k_item = k_item.widened(labels.size());
    ds.k_user = k_user.widened(labels.size());
  } else {
    ds.k_item = k_item.widened(labels.size());
    ds.k_user = derive_user_keyphrases(ds.r_train, ds.k_item);
  }
  ds.keyphrases = std::move(labels);
  ds.validate();
  return ds;
}

}  // namespace critiq
