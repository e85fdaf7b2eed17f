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

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "critiq/data/dataset.hpp"
#include "critiq/model/elbo.hpp"
#include "critiq/model/mmvae.hpp"

namespace critiq {

struct TrainingConfig {
  std::size_t latent_dim = 64;   // H
  std::size_t hidden_dim = 0;    // 0 means "same as latent_dim"
  double learning_rate = 1e-3;
  double lambda = 1.0;
  double beta_target = 0.2;
  std::size_t anneal_steps = 0;  // minibatches; 0 means one epoch
  std::size_t epochs = 50;
  std::size_t batch_size = 32;
  double dropout = 0.5;
  double l2_weight = 0.0;
  std::uint64_t seed = 1;
  MixtureEstimator estimator = MixtureEstimator::kStratified;

  std::size_t effective_hidden() const {
    return hidden_dim == 0 ? latent_dim : hidden_dim;
  }
  // Throws ValidationError on out-of-domain values.
  void validate() const;
};

// Hyperparameters per dataset family: beer, cds, yelp, hotel, toy.
TrainingConfig training_preset(std::string_view name);

struct TrainingReport {
  std::vector<double> epoch_loss;  // mean loss per user, per epoch
  std::size_t steps = 0;
};

MmvaeModel<float> create_model(const Dataset& dataset,
                               const TrainingConfig& config);

using EpochCallback = std::function<void(std::size_t epoch, double loss)>;

// Weakly supervised training. Per minibatch the loss sums the joint bound
// over users with both modalities observed, the interaction bound over users
// with r observed and the keyphrase bound over users with k observed; beta
// ramps linearly from 0 to beta_target over anneal_steps minibatches.
TrainingReport train(MmvaeModel<float>& model, const Dataset& dataset,
                     const ModalityMask& mask, const TrainingConfig& config,
                     const EpochCallback& on_epoch = {});

}  // namespace critiq
