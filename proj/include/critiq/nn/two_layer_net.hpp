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
#include <span>

#include "critiq/nn/dense_matrix.hpp"

namespace critiq {

// Gradients with the same shapes as a TwoLayerNet's parameters; biases are
// 1 x n matrices.
template <typename T>
struct NetGradients {
  Matrix<T> w1, b1, w2, b2;

  std::array<Matrix<T>*, 4> blocks() { return {&w1, &b1, &w2, &b2}; }
  std::array<const Matrix<T>*, 4> blocks() const { return {&w1, &b1, &w2, &b2}; }
  void zero();
  void add(const NetGradients& other);
  void scale(double factor);
};

template <typename T>
struct ForwardCache {
  Matrix<T> input;        // after dropout
  Matrix<T> dropout_mask; // empty when dropout was not applied
  Matrix<T> hidden;       // tanh activations
  Matrix<T> output;
  std::uint64_t generation = 0;
};

// in -> tanh(x W1 + b1) W2 + b2 -> out
template <typename T>
class TwoLayerNet {
 public:
  TwoLayerNet() = default;
  // All-zero parameters.
  TwoLayerNet(std::size_t in_dim, std::size_t hidden_dim, std::size_t out_dim);

  static TwoLayerNet xavier(std::size_t in_dim, std::size_t hidden_dim,
                            std::size_t out_dim, Rng& rng);

  std::size_t in_dim() const { return w1_.rows(); }
  std::size_t hidden_dim() const { return w1_.cols(); }
  std::size_t out_dim() const { return w2_.cols(); }

  // Inverted dropout on the input in training mode (mask scaled by
  // 1/(1-p)); evaluation mode is deterministic.
  ForwardCache<T> forward(const Matrix<T>& x, double dropout_rate,
                          bool training, Rng& rng) const;
  Matrix<T> predict(const Matrix<T>& x) const;

  // Accumulates parameter gradients into `grads` (if non-null) and returns
  // the gradient with respect to the (pre-dropout) input when requested.
  // Throws ContractViolation if parameters changed since `cache` was made.
  Matrix<T> backward(const ForwardCache<T>& cache, const Matrix<T>& upstream,
                     NetGradients<T>* grads, bool want_input_grad = true) const;

  NetGradients<T> zero_gradients() const;

  const Matrix<T>& w1() const { return w1_; }
  const Matrix<T>& b1() const { return b1_; }
  const Matrix<T>& w2() const { return w2_; }
  const Matrix<T>& b2() const { return b2_; }

  // Mutable access invalidates outstanding forward caches.
  std::array<Matrix<T>*, 4> mutable_blocks();
  std::array<const Matrix<T>*, 4> blocks() const { return {&w1_, &b1_, &w2_, &b2_}; }
  std::uint64_t generation() const { return generation_; }

  template <typename U>
  TwoLayerNet<U> cast() const {
    TwoLayerNet<U> out(in_dim(), hidden_dim(), out_dim());
    auto dst = out.mutable_blocks();
    auto src = blocks();
    for (std::size_t b = 0; b < 4; ++b) *dst[b] = src[b]->template cast<U>();
    return out;
  }

 private:
  Matrix<T> w1_, b1_, w2_, b2_;
  std::uint64_t generation_ = 0;
};

}  // namespace critiq
