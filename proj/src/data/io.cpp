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

#include <charconv>
#include <fstream>
#include <set>
#include <string>
#include <string_view>

#include "critiq/data/dataset.hpp"
#include "critiq/error.hpp"

namespace critiq {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  const char sep = line.find('\t') != std::string_view::npos ? '\t' : ',';
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    fields.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

bool skip_line(std::string_view line) {
  line = trim(line);
  return line.empty() || line.front() == '#';
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

}  // namespace

InteractionTable load_interactions(const std::filesystem::path& path,
                                   double threshold, IdMap users,
                                   IdMap items) {
  auto in = open_or_throw(path);
  InteractionTable table;
  table.users = std::move(users);
  table.items = std::move(items);
  table.threshold = threshold;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty()) {
      throw ParseError(path.string(), line_no,
                       "expected user, item, rating");
    }
    double rating = 0.0;
    const auto* end = fields[2].data() + fields[2].size();
    const auto [ptr, ec] = std::from_chars(fields[2].data(), end, rating);
    if (ec != std::errc() || ptr != end) {
      throw ParseError(path.string(), line_no,
                       "bad rating '" + std::string(fields[2]) + "'");
    }
    if (!(rating >= 0.0 && rating <= 5.0)) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                            ": rating " + std::string(fields[2]) +
                            " outside [0, 5]");
    }
    const Index u = table.users.intern(fields[0]);
    const Index i = table.items.intern(fields[1]);
    table.records.push_back({u, i, rating});
  }

  std::vector<std::pair<Index, Index>> pairs;
  for (const auto& rec : table.records) {
    if (rec.rating > threshold) pairs.emplace_back(rec.user, rec.item);
  }
  table.positives = SparseBinaryMatrix::from_pairs(
      table.users.size(), table.items.size(), pairs);
  return table;
}

SparseBinaryMatrix load_keyphrases(const std::filesystem::path& path,
                                   const IdMap& rows, IdMap& labels) {
  auto in = open_or_throw(path);
  std::vector<std::pair<Index, Index>> pairs;
  std::set<std::string> unknown;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    const auto fields = split_fields(line);
    if (fields.size() < 2 || fields.size() > 3 || fields[0].empty() ||
        fields[1].empty()) {
      throw ParseError(path.string(), line_no, "expected row_id, keyphrase");
    }
    if (fields.size() == 3) {
      if (fields[2] == "0") continue;
      if (fields[2] != "1") {
        throw ParseError(path.string(), line_no,
                         "indicator must be 0 or 1");
      }
    }
    const auto row = rows.find(fields[0]);
    if (!row) {
      unknown.emplace(fields[0]);
      continue;
    }
    pairs.emplace_back(*row, labels.intern(fields[1]));
  }
  if (!unknown.empty()) {
    std::string msg = path.string() + ": unknown ids:";
    for (const auto& id : unknown) msg += " " + id;
    throw ResolutionError(msg, {unknown.begin(), unknown.end()});
  }
  return SparseBinaryMatrix::from_pairs(rows.size(), labels.size(), pairs);
}

}  // namespace critiq
