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
#include <random>
#include <span>
#include <vector>

#include "critiq/data/sparse_matrix.hpp"

namespace critiq {

using Rng = std::mt19937_64;

// Row-major dense matrix. Reductions accumulate in double regardless of T.
template <typename T>
class Matrix {
 public:
  using value_type = T;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T(0))
      : rows_(rows), cols_(cols), values_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return values_.size(); }

  T& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  T operator()(std::size_t r, std::size_t c) const {
    return values_[r * cols_ + c];
  }

  std::span<T> row(std::size_t r) { return {values_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const {
    return {values_.data() + r * cols_, cols_};
  }

  std::span<T> values() { return values_; }
  std::span<const T> values() const { return values_; }

  void fill(T value);
  bool all_finite() const;

  template <typename U>
  Matrix<U> cast() const {
    return Matrix<U>(rows_, cols_, std::vector<U>(values_.begin(), values_.end()));
  }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> values_;
};

using DenseMatrix = Matrix<float>;

// out = a * b (+ bias broadcast over rows when non-empty). Zero entries of `a`
// are skipped.
template <typename T>
Matrix<T> matmul(const Matrix<T>& a, const Matrix<T>& b,
                 std::span<const T> bias = {});

// out = a * b^T
template <typename T>
Matrix<T> matmul_transposed(const Matrix<T>& a, const Matrix<T>& b);

// out += a^T * b
template <typename T>
void accumulate_transposed_product(const Matrix<T>& a, const Matrix<T>& b,
                                   Matrix<T>& out);

// Rows scaled to unit Euclidean norm; zero rows stay zero.
template <typename T>
Matrix<T> l2_normalize_rows(const Matrix<T>& m);

// Dense batch of L2-normalized indicator rows (each entry 1/sqrt(k)).
template <typename T>
Matrix<T> normalized_indicator_rows(
    const std::vector<std::span<const Index>>& rows, std::size_t n_cols);

// Uniform in +-sqrt(6 / (rows + cols)).
template <typename T>
Matrix<T> xavier_init(std::size_t rows, std::size_t cols, Rng& rng);

double squared_norm(std::span<const float> v);
double squared_norm(std::span<const double> v);

}  // namespace critiq
