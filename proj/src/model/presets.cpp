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

#include <string>

#include "critiq/error.hpp"
#include "critiq/model/trainer.hpp"

namespace critiq {

void TrainingConfig::validate() const {
  if (latent_dim == 0) throw ValidationError("latent_dim must be positive");
  if (!(learning_rate > 0.0)) throw ValidationError("learning_rate must be > 0");
  if (!(lambda > 0.0)) throw ValidationError("lambda must be > 0");
  if (!(beta_target >= 0.0)) throw ValidationError("beta must be >= 0");
  if (epochs == 0) throw ValidationError("epochs must be positive");
  if (batch_size == 0) throw ValidationError("batch_size must be positive");
  if (!(dropout >= 0.0 && dropout < 1.0)) {
    throw ValidationError("dropout must lie in [0, 1)");
  }
  if (!(l2_weight >= 0.0)) throw ValidationError("l2_weight must be >= 0");
}

TrainingConfig training_preset(std::string_view name) {
  TrainingConfig c;
  if (name == "toy") return c;

  c.learning_rate = 5e-5;
  c.batch_size = 128;
  if (name == "beer") {
    c.latent_dim = 300;
    c.l2_weight = 1e-10;
    c.lambda = 3.0;
    c.beta_target = 0.7;
    c.epochs = 300;
    c.dropout = 0.4;
  } else if (name == "cds") {
    c.latent_dim = 400;
    c.l2_weight = 1e-12;
    c.lambda = 1.0;
    c.beta_target = 0.4;
    c.epochs = 400;
    c.dropout = 0.4;
  } else if (name == "yelp") {
    c.latent_dim = 500;
    c.l2_weight = 1e-10;
    c.lambda = 10.0;
    c.beta_target = 0.8;
    c.epochs = 300;
    c.dropout = 0.7;
  } else if (name == "hotel") {
    c.latent_dim = 400;
    c.l2_weight = 1e-12;
    c.lambda = 2.0;
    c.beta_target = 0.8;
    c.epochs = 300;
    c.dropout = 0.0;
  } else {
    throw ValidationError("unknown preset '" + std::string(name) + "'");
  }
  return c;
}

}  // namespace critiq
