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

#include "critiq/nn/dense_matrix.hpp"

#include <cmath>

#include "critiq/error.hpp"

namespace critiq {

template <typename T>
Matrix<T>::Matrix(std::size_t rows, std::size_t cols, std::vector<T> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) {
    throw ContractViolation("matrix value count does not match its shape");
  }
}

template <typename T>
void Matrix<T>::fill(T value) {
  std::fill(values_.begin(), values_.end(), value);
}

template <typename T>
bool Matrix<T>::all_finite() const {
  for (T v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

template <typename T>
Matrix<T> matmul(const Matrix<T>& a, const Matrix<T>& b,
                 std::span<const T> bias) {
  if (a.cols() != b.rows()) throw ContractViolation("matmul: shape mismatch");
  if (!bias.empty() && bias.size() != b.cols()) {
    throw ContractViolation("matmul: bias length mismatch");
  }
  const std::size_t n = b.cols();
  Matrix<T> out(a.rows(), n);
  std::vector<double> acc(n);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    if (bias.empty()) {
      std::fill(acc.begin(), acc.end(), 0.0);
    } else {
      std::copy(bias.begin(), bias.end(), acc.begin());
    }
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double x = a(r, k);
      if (x == 0.0) continue;
      const T* brow = b.row(k).data();
      for (std::size_t c = 0; c < n; ++c) acc[c] += x * brow[c];
    }
    auto orow = out.row(r);
    for (std::size_t c = 0; c < n; ++c) orow[c] = static_cast<T>(acc[c]);
  }
  return out;
}

template <typename T>
Matrix<T> matmul_transposed(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.cols()) {
    throw ContractViolation("matmul_transposed: shape mismatch");
  }
  Matrix<T> out(a.rows(), b.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const T* arow = a.row(r).data();
    for (std::size_t j = 0; j < b.rows(); ++j) {
      const T* brow = b.row(j).data();
      double acc = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) {
        acc += static_cast<double>(arow[k]) * brow[k];
      }
      out(r, j) = static_cast<T>(acc);
    }
  }
  return out;
}

template <typename T>
void accumulate_transposed_product(const Matrix<T>& a, const Matrix<T>& b,
                                   Matrix<T>& out) {
  if (a.rows() != b.rows() || out.rows() != a.cols() ||
      out.cols() != b.cols()) {
    throw ContractViolation("accumulate_transposed_product: shape mismatch");
  }
  // Accumulate each output row in double across the batch.
  std::vector<double> acc(b.cols());
  for (std::size_t i = 0; i < a.cols(); ++i) {
    auto orow = out.row(i);
    std::copy(orow.begin(), orow.end(), acc.begin());
    bool touched = false;
    for (std::size_t r = 0; r < a.rows(); ++r) {
      const double x = a(r, i);
      if (x == 0.0) continue;
      touched = true;
      const T* brow = b.row(r).data();
      for (std::size_t c = 0; c < b.cols(); ++c) acc[c] += x * brow[c];
    }
    if (!touched) continue;
    for (std::size_t c = 0; c < b.cols(); ++c) orow[c] = static_cast<T>(acc[c]);
  }
}

template <typename T>
Matrix<T> l2_normalize_rows(const Matrix<T>& m) {
  Matrix<T> out = m;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = out.row(r);
    double sq = 0.0;
    for (T v : row) sq += static_cast<double>(v) * v;
    if (sq == 0.0) continue;
    const double inv = 1.0 / std::sqrt(sq);
    for (T& v : row) v = static_cast<T>(v * inv);
  }
  return out;
}

template <typename T>
Matrix<T> normalized_indicator_rows(
    const std::vector<std::span<const Index>>& rows, std::size_t n_cols) {
  Matrix<T> out(rows.size(), n_cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].empty()) continue;
    const T value = static_cast<T>(1.0 / std::sqrt(static_cast<double>(rows[r].size())));
    for (Index c : rows[r]) {
      if (c >= n_cols) throw ContractViolation("indicator column out of range");
      out(r, c) = value;
    }
  }
  return out;
}

template <typename T>
Matrix<T> xavier_init(std::size_t rows, std::size_t cols, Rng& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
  std::uniform_real_distribution<double> dist(-bound, bound);
  Matrix<T> out(rows, cols);
  for (T& v : out.values()) v = static_cast<T>(dist(rng));
  return out;
}

double squared_norm(std::span<const float> v) {
  double acc = 0.0;
  for (float x : v) acc += static_cast<double>(x) * x;
  return acc;
}

double squared_norm(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return acc;
}

#define CRITIQ_INSTANTIATE(T)                                                 \
  template class Matrix<T>;                                                   \
  template Matrix<T> matmul(const Matrix<T>&, const Matrix<T>&,               \
                            std::span<const T>);                              \
  template Matrix<T> matmul_transposed(const Matrix<T>&, const Matrix<T>&);   \
  template void accumulate_transposed_product(const Matrix<T>&,               \
                                              const Matrix<T>&, Matrix<T>&);  \
  template Matrix<T> l2_normalize_rows(const Matrix<T>&);                     \
  template Matrix<T> normalized_indicator_rows(                               \
      const std::vector<std::span<const Index>>&, std::size_t);               \
  template Matrix<T> xavier_init(std::size_t, std::size_t, Rng&);

CRITIQ_INSTANTIATE(float)
CRITIQ_INSTANTIATE(double)

#undef CRITIQ_INSTANTIATE

}  // namespace critiq
