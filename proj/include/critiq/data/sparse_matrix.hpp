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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace critiq {

using Index = std::uint32_t;
using IndexList = std::vector<Index>;

// Binary matrix stored as one sorted column-index list per row. Present
// entries are implicitly 1.
class SparseBinaryMatrix {
 public:
  SparseBinaryMatrix() = default;
  SparseBinaryMatrix(std::size_t n_rows, std::size_t n_cols);

  // Rows must be strictly increasing and within n_cols; throws
  // ContractViolation otherwise.
  SparseBinaryMatrix(std::size_t n_cols, std::vector<IndexList> rows);

  // Builds from unordered (row, col) pairs; duplicates collapse.
  static SparseBinaryMatrix from_pairs(
      std::size_t n_rows, std::size_t n_cols,
      const std::vector<std::pair<Index, Index>>& pairs);

  std::size_t n_rows() const { return rows_.size(); }
  std::size_t n_cols() const { return n_cols_; }
  std::size_t nnz() const;

  std::span<const Index> row(std::size_t r) const { return rows_.at(r); }
  bool contains(std::size_t r, Index c) const;
  const std::vector<IndexList>& rows() const { return rows_; }

  // Number of ones in each column.
  std::vector<std::size_t> column_counts() const;
  SparseBinaryMatrix transpose() const;
  // Same rows over a wider column space.
  SparseBinaryMatrix widened(std::size_t n_cols) const;

  bool operator==(const SparseBinaryMatrix&) const = default;

 private:
  std::size_t n_cols_ = 0;
  std::vector<IndexList> rows_;
};

// Sorted-set helpers over index lists.
IndexList set_union(std::span<const Index> a, std::span<const Index> b);
bool sorted_contains(std::span<const Index> sorted, Index value);

}  // namespace critiq
