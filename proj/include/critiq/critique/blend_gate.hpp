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
#include <span>
#include <vector>

#include "critiq/model/checkpoint.hpp"
#include "critiq/nn/dense_matrix.hpp"

namespace critiq {

// GRU-style gate folding a critique embedding into the user latent. Row
// vectors multiply on the left: pre = x * W_in + h * W_hidden + b.
template <typename T>
struct BlendGate {
  Matrix<T> w_ir, w_iu, w_in;  // input -> reset / update / candidate
  Matrix<T> w_hr, w_hu, w_hn;  // hidden -> reset / update / candidate
  Matrix<T> b_r, b_u, b_n;     // 1 x H

  BlendGate() = default;
  // All-zero gate of width `dim`.
  explicit BlendGate(std::size_t dim);
  // Xavier matrices, zero biases.
  static BlendGate create(std::size_t dim, Rng& rng);

  std::size_t dim() const { return w_ir.rows(); }
  std::array<Matrix<T>*, 9> blocks();
  std::array<const Matrix<T>*, 9> blocks() const;
  void zero();

  template <typename U>
  BlendGate<U> cast() const {
    BlendGate<U> out;
    auto dst = out.blocks();
    auto src = blocks();
    for (std::size_t b = 0; b < 9; ++b) *dst[b] = src[b]->template cast<U>();
    return out;
  }
};

template <typename T>
struct GateStep {
  std::vector<T> x, h, r, u, n;
};

template <typename T>
struct BlendTrace {
  std::array<GateStep<T>, 2> steps;
  std::vector<T> output;
};

// h0 = 0; step one reads z0, step two reads zc; returns h2.
template <typename T>
std::vector<T> blend(const BlendGate<T>& gate, std::span<const T> z0,
                     std::span<const T> zc);

template <typename T>
BlendTrace<T> blend_forward(const BlendGate<T>& gate, std::span<const T> z0,
                            std::span<const T> zc);

// Accumulates dL/dparams into `grads` given dL/dh2.
template <typename T>
void blend_backward(const BlendGate<T>& gate, const BlendTrace<T>& trace,
                    std::span<const T> d_output, BlendGate<T>& grads);

inline constexpr char kGateSectionTag[] = "BLEND1";

CheckpointSection gate_section(const BlendGate<float>& gate,
                               const nlohmann::json& meta = nlohmann::json::object());
BlendGate<float> gate_from_section(const CheckpointSection& section);
std::string gate_digest(const BlendGate<float>& gate);

}  // namespace critiq
