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

#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "critiq/critique/blend_gate.hpp"
#include "critiq/critique/synthetic.hpp"
#include "critiq/data/dataset.hpp"
#include "critiq/model/mmvae.hpp"

namespace critiq {

struct BlenderConfig {
  double margin = 1.0;
  double learning_rate = 1e-3;
  double l2_weight = 0.0;
  std::size_t epochs = 20;
  std::size_t batch_size = 64;
  std::size_t restrict_top = 100;  // 0 keeps the whole catalog
  std::uint64_t seed = 1;

  void validate() const;
};

// Margin and L2 per dataset family: beer, cds, yelp, hotel, toy.
BlenderConfig blender_preset(std::string_view name);

struct BlenderReport {
  std::vector<double> epoch_loss;  // mean per example
  std::size_t steps = 0;
  std::size_t examples = 0;
  std::size_t skipped = 0;
};

// Interaction-expert posterior mean per user; users without training
// interactions get a zero row.
template <typename T>
Matrix<T> base_latents(const MmvaeModel<T>& model, const SparseBinaryMatrix& r_train);

// Keyphrase-expert embedding of every one-hot critique.
template <typename T>
Matrix<T> critique_latents(const MmvaeModel<T>& model);

// Summed max-margin loss of the batch with the VAE held fixed. Gate
// gradients are accumulated into `grads` when non-null.
template <typename T>
double blender_objective(const MmvaeModel<T>& model, const BlendGate<T>& gate,
                         std::span<const SyntheticExample* const> batch,
                         const Matrix<T>& user_latents,
                         const Matrix<T>& keyphrase_latents, double margin,
                         BlendGate<T>* grads);

using BlenderCallback = std::function<void(std::size_t epoch, double loss)>;

// Builds the synthetic set from the validation split and trains `gate`.
// The VAE is only read.
BlenderReport train_blender(const MmvaeModel<float>& model, const Dataset& dataset,
                            BlendGate<float>& gate, const BlenderConfig& config,
                            const BlenderCallback& on_epoch = {});

}  // namespace critiq
