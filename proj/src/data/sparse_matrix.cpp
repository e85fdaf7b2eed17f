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

#include "critiq/data/sparse_matrix.hpp"

#include <algorithm>
#include <string>

#include "critiq/error.hpp"

namespace critiq {

SparseBinaryMatrix::SparseBinaryMatrix(std::size_t n_rows, std::size_t n_cols)
    : n_cols_(n_cols), rows_(n_rows) {}

SparseBinaryMatrix::SparseBinaryMatrix(std::size_t n_cols,
                                       std::vector<IndexList> rows)
    : n_cols_(n_cols), rows_(std::move(rows)) {
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const auto& row = rows_[r];
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (row[j] >= n_cols_) {
        throw ContractViolation("row " + std::to_string(r) + ": column " +
                                std::to_string(row[j]) + " >= " +
                                std::to_string(n_cols_));
      }
      if (j > 0 && row[j] <= row[j - 1]) {
        throw ContractViolation("row " + std::to_string(r) +
                                " is not strictly increasing");
      }
    }
  }
}

SparseBinaryMatrix SparseBinaryMatrix::from_pairs(
    std::size_t n_rows, std::size_t n_cols,
    const std::vector<std::pair<Index, Index>>& pairs) {
  std::vector<IndexList> rows(n_rows);
  for (const auto& [r, c] : pairs) {
    if (r >= n_rows) {
      throw ContractViolation("row index " + std::to_string(r) +
                              " out of range");
    }
    rows[r].push_back(c);
  }
  for (auto& row : rows) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  return SparseBinaryMatrix(n_cols, std::move(rows));
}

std::size_t SparseBinaryMatrix::nnz() const {
  std::size_t total = 0;
  for (const auto& row : rows_) total += row.size();
  return total;
}

bool SparseBinaryMatrix::contains(std::size_t r, Index c) const {
  return sorted_contains(rows_.at(r), c);
}

std::vector<std::size_t> SparseBinaryMatrix::column_counts() const {
  std::vector<std::size_t> counts(n_cols_, 0);
  for (const auto& row : rows_) {
    for (Index c : row) ++counts[c];
  }
  return counts;
}

SparseBinaryMatrix SparseBinaryMatrix::transpose() const {
  std::vector<IndexList> cols(n_cols_);
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    for (Index c : rows_[r]) cols[c].push_back(static_cast<Index>(r));
  }
  return SparseBinaryMatrix(rows_.size(), std::move(cols));
}

SparseBinaryMatrix SparseBinaryMatrix::widened(std::size_t n_cols) const {
  if (n_cols < n_cols_) {
    throw ContractViolation("widened() cannot shrink the column space");
  }
  SparseBinaryMatrix out = *this;
  out.n_cols_ = n_cols;
  return out;
}

IndexList set_union(std::span<const Index> a, std::span<const Index> b) {
  IndexList out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(out));
  return out;
}

bool sorted_contains(std::span<const Index> sorted, Index value) {
  return std::binary_search(sorted.begin(), sorted.end(), value);
}

}  // namespace critiq
