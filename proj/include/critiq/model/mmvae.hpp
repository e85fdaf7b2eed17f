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

#include <optional>
#include <span>
#include <vector>

#include "critiq/data/sparse_matrix.hpp"
#include "critiq/model/gaussian.hpp"
#include "critiq/nn/two_layer_net.hpp"

namespace critiq {

enum class Modality { kInteractions, kKeyphrases };

struct ModelDims {
  std::size_t n_items = 0;
  std::size_t n_keyphrases = 0;
  std::size_t latent = 0;
  std::size_t hidden = 0;

  bool operator==(const ModelDims&) const = default;
};

using SparseRows = std::vector<std::span<const Index>>;
using OptionalRow = std::optional<std::span<const Index>>;

// Two modality encoders (each emitting mu || log-sigma) and two multinomial
// decoders sharing one latent space.
template <typename T>
struct MmvaeModel {
  TwoLayerNet<T> enc_r;  // |I| -> 2H
  TwoLayerNet<T> enc_k;  // |K| -> 2H
  TwoLayerNet<T> dec_r;  // H -> |I|
  TwoLayerNet<T> dec_k;  // H -> |K|

  static MmvaeModel create(const ModelDims& dims, Rng& rng);

  ModelDims dims() const;
  const TwoLayerNet<T>& encoder(Modality m) const;
  TwoLayerNet<T>& encoder(Modality m);
  const TwoLayerNet<T>& decoder(Modality m) const;
  TwoLayerNet<T>& decoder(Modality m);

  template <typename U>
  MmvaeModel<U> cast() const {
    return {enc_r.template cast<U>(), enc_k.template cast<U>(),
            dec_r.template cast<U>(), dec_k.template cast<U>()};
  }
};

template <typename T>
struct ModelGradients {
  NetGradients<T> enc_r, enc_k, dec_r, dec_k;

  static ModelGradients zeros_like(const MmvaeModel<T>& model);
  NetGradients<T>& encoder(Modality m) {
    return m == Modality::kInteractions ? enc_r : enc_k;
  }
  NetGradients<T>& decoder(Modality m) {
    return m == Modality::kInteractions ? dec_r : dec_k;
  }
  std::array<NetGradients<T>*, 4> nets() { return {&enc_r, &enc_k, &dec_r, &dec_k}; }
  void zero();
};

// Batch encoder output before clamping: mu and raw log-sigma, B x H each.
template <typename T>
struct EncoderOutput {
  Matrix<T> mu;
  Matrix<T> log_sigma_raw;
};

template <typename T>
EncoderOutput<T> split_encoder_output(const Matrix<T>& out);

// Posterior of one expert for one user.
template <typename T>
GaussianParams<T> expert_posterior(const MmvaeModel<T>& model, Modality m,
                                   std::span<const Index> row);

template <typename T>
struct WeightedExpert {
  Modality modality;
  double weight;
  GaussianParams<T> params;
};

// Mixture-of-experts posterior. With one observed modality it holds that
// expert alone (weight 1); with both, two experts weighted 1/2 each.
template <typename T>
struct MixturePosterior {
  std::vector<WeightedExpert<T>> experts;

  // Mean of the mixture: the weighted average of expert means.
  std::vector<T> mean() const;
};

// Throws ContractViolation when neither modality is present.
template <typename T>
MixturePosterior<T> encode(const MmvaeModel<T>& model, OptionalRow r,
                           OptionalRow k);

}  // namespace critiq
