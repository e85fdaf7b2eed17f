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

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "critiq/critique/blend_gate.hpp"
#include "critiq/model/mmvae.hpp"

namespace critiq {

using Latent = std::vector<float>;

// Keyphrase-expert posterior mean of the one-hot critique row.
Latent embed_critique(const MmvaeModel<float>& model, Index keyphrase);

// One embedding per keyphrase, row c of the result is keyphrase c.
Matrix<float> embed_all_keyphrases(const MmvaeModel<float>& model);

enum class Composition {
  kAverageThenBlend,  // mean of critique embeddings, one gated blend
  kSequential,        // z <- blend(z, z_c) for each critique in order
};

// Folds critique embeddings into the base latent. An empty list returns z0.
class Blender {
 public:
  virtual ~Blender() = default;
  virtual Latent combine(std::span<const float> z0,
                         std::span<const Latent> critiques) const = 0;
  virtual std::string name() const = 0;
};

class GateBlender final : public Blender {
 public:
  explicit GateBlender(BlendGate<float> gate,
                       Composition composition = Composition::kAverageThenBlend);
  Latent combine(std::span<const float> z0,
                 std::span<const Latent> critiques) const override;
  std::string name() const override { return "gate"; }
  const BlendGate<float>& gate() const { return gate_; }

 private:
  BlendGate<float> gate_;
  Composition composition_;
};

// Uniform mean of the base latent and every critique embedding.
class UacBlender final : public Blender {
 public:
  Latent combine(std::span<const float> z0,
                 std::span<const Latent> critiques) const override;
  std::string name() const override { return "uac"; }
};

// Mean of the base latent and the mean critique embedding.
class BacBlender final : public Blender {
 public:
  Latent combine(std::span<const float> z0,
                 std::span<const Latent> critiques) const override;
  std::string name() const override { return "bac"; }
};

Latent mean_latent(std::span<const Latent> vectors);

}  // namespace critiq
