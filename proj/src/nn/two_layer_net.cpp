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

#include "critiq/nn/two_layer_net.hpp"

#include <atomic>
#include <cmath>

#include "critiq/error.hpp"

namespace critiq {
namespace {

std::atomic<std::uint64_t> g_generation{0};

std::uint64_t next_generation() { return ++g_generation; }

}  // namespace

template <typename T>
void NetGradients<T>::zero() {
  for (auto* b : blocks()) b->fill(T(0));
}

template <typename T>
void NetGradients<T>::add(const NetGradients& other) {
  auto dst = blocks();
  auto src = other.blocks();
  for (std::size_t b = 0; b < dst.size(); ++b) {
    auto d = dst[b]->values();
    auto s = src[b]->values();
    for (std::size_t i = 0; i < d.size(); ++i) d[i] += s[i];
  }
}

template <typename T>
void NetGradients<T>::scale(double factor) {
  for (auto* b : blocks()) {
    for (T& v : b->values()) v = static_cast<T>(v * factor);
  }
}

template <typename T>
TwoLayerNet<T>::TwoLayerNet(std::size_t in_dim, std::size_t hidden_dim,
                            std::size_t out_dim)
    : w1_(in_dim, hidden_dim),
      b1_(1, hidden_dim),
      w2_(hidden_dim, out_dim),
      b2_(1, out_dim),
      generation_(next_generation()) {}

template <typename T>
TwoLayerNet<T> TwoLayerNet<T>::xavier(std::size_t in_dim, std::size_t hidden_dim,
                                      std::size_t out_dim, Rng& rng) {
  TwoLayerNet net(in_dim, hidden_dim, out_dim);
  net.w1_ = xavier_init<T>(in_dim, hidden_dim, rng);
  net.w2_ = xavier_init<T>(hidden_dim, out_dim, rng);
  return net;
}

template <typename T>
ForwardCache<T> TwoLayerNet<T>::forward(const Matrix<T>& x,
                                        double dropout_rate, bool training,
                                        Rng& rng) const {
  if (x.cols() != in_dim()) {
    throw ContractViolation("forward: input has " + std::to_string(x.cols()) +
                            " columns, expected " + std::to_string(in_dim()));
  }
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    throw ContractViolation("forward: dropout rate must lie in [0, 1)");
  }
  ForwardCache<T> cache;
  cache.generation = generation_;
  cache.input = x;
  if (training && dropout_rate > 0.0) {
    const T keep_scale = static_cast<T>(1.0 / (1.0 - dropout_rate));
    std::bernoulli_distribution keep(1.0 - dropout_rate);
    cache.dropout_mask = Matrix<T>(x.rows(), x.cols());
    auto mask = cache.dropout_mask.values();
    auto in = cache.input.values();
    for (std::size_t i = 0; i < in.size(); ++i) {
      mask[i] = keep(rng) ? keep_scale : T(0);
      in[i] *= mask[i];
    }
  }
  cache.hidden = matmul(cache.input, w1_, b1_.values());
  for (T& v : cache.hidden.values()) v = std::tanh(v);
  cache.output = matmul(cache.hidden, w2_, b2_.values());
  return cache;
}

template <typename T>
Matrix<T> TwoLayerNet<T>::predict(const Matrix<T>& x) const {
  Rng unused(0);
  return forward(x, 0.0, false, unused).output;
}

template <typename T>
Matrix<T> TwoLayerNet<T>::backward(const ForwardCache<T>& cache,
                                   const Matrix<T>& upstream,
                                   NetGradients<T>* grads,
                                   bool want_input_grad) const {
  if (cache.generation != generation_) {
    throw ContractViolation("backward: forward cache is stale");
  }
  if (upstream.rows() != cache.output.rows() ||
      upstream.cols() != out_dim()) {
    throw ContractViolation("backward: upstream gradient shape mismatch");
  }
  if (grads != nullptr) {
    accumulate_transposed_product(cache.hidden, upstream, grads->w2);
    auto db2 = grads->b2.values();
    for (std::size_t r = 0; r < upstream.rows(); ++r) {
      auto g = upstream.row(r);
      for (std::size_t c = 0; c < g.size(); ++c) db2[c] += g[c];
    }
  }
  // d(pre-activation) = (upstream W2^T) * (1 - tanh^2)
  Matrix<T> dpre = matmul_transposed(upstream, w2_);
  auto dp = dpre.values();
  auto h = cache.hidden.values();
  for (std::size_t i = 0; i < dp.size(); ++i) dp[i] *= T(1) - h[i] * h[i];

  if (grads != nullptr) {
    accumulate_transposed_product(cache.input, dpre, grads->w1);
    auto db1 = grads->b1.values();
    for (std::size_t r = 0; r < dpre.rows(); ++r) {
      auto g = dpre.row(r);
      for (std::size_t c = 0; c < g.size(); ++c) db1[c] += g[c];
    }
  }
  if (!want_input_grad) return {};
  Matrix<T> dx = matmul_transposed(dpre, w1_);
  if (cache.dropout_mask.size() != 0) {
    auto d = dx.values();
    auto m = cache.dropout_mask.values();
    for (std::size_t i = 0; i < d.size(); ++i) d[i] *= m[i];
  }
  return dx;
}

template <typename T>
NetGradients<T> TwoLayerNet<T>::zero_gradients() const {
  return {Matrix<T>(w1_.rows(), w1_.cols()), Matrix<T>(1, b1_.cols()),
          Matrix<T>(w2_.rows(), w2_.cols()), Matrix<T>(1, b2_.cols())};
}

template <typename T>
std::array<Matrix<T>*, 4> TwoLayerNet<T>::mutable_blocks() {
  generation_ = next_generation();
  return {&w1_, &b1_, &w2_, &b2_};
}

template struct NetGradients<float>;
template struct NetGradients<double>;
template class TwoLayerNet<float>;
template class TwoLayerNet<double>;

}  // namespace critiq
