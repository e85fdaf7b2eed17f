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

#include "critiq/model/mmvae.hpp"

#include <algorithm>
#include <cmath>

#include "critiq/error.hpp"

namespace critiq {

template <typename T>
MmvaeModel<T> MmvaeModel<T>::create(const ModelDims& dims, Rng& rng) {
  if (dims.n_items == 0 || dims.n_keyphrases == 0 || dims.latent == 0 ||
      dims.hidden == 0) {
    throw ContractViolation("model dims must be positive");
  }
  MmvaeModel model;
  model.enc_r = TwoLayerNet<T>::xavier(dims.n_items, dims.hidden,
                                       2 * dims.latent, rng);
  model.enc_k = TwoLayerNet<T>::xavier(dims.n_keyphrases, dims.hidden,
                                       2 * dims.latent, rng);
  model.dec_r = TwoLayerNet<T>::xavier(dims.latent, dims.hidden, dims.n_items, rng);
  model.dec_k = TwoLayerNet<T>::xavier(dims.latent, dims.hidden,
                                       dims.n_keyphrases, rng);
  return model;
}

template <typename T>
ModelDims MmvaeModel<T>::dims() const {
  return {enc_r.in_dim(), enc_k.in_dim(), dec_r.in_dim(), enc_r.hidden_dim()};
}

template <typename T>
const TwoLayerNet<T>& MmvaeModel<T>::encoder(Modality m) const {
  return m == Modality::kInteractions ? enc_r : enc_k;
}
template <typename T>
TwoLayerNet<T>& MmvaeModel<T>::encoder(Modality m) {
  return m == Modality::kInteractions ? enc_r : enc_k;
}
template <typename T>
const TwoLayerNet<T>& MmvaeModel<T>::decoder(Modality m) const {
  return m == Modality::kInteractions ? dec_r : dec_k;
}
template <typename T>
TwoLayerNet<T>& MmvaeModel<T>::decoder(Modality m) {
  return m == Modality::kInteractions ? dec_r : dec_k;
}

template <typename T>
ModelGradients<T> ModelGradients<T>::zeros_like(const MmvaeModel<T>& model) {
  return {model.enc_r.zero_gradients(), model.enc_k.zero_gradients(),
          model.dec_r.zero_gradients(), model.dec_k.zero_gradients()};
}

template <typename T>
void ModelGradients<T>::zero() {
  for (auto* net : nets()) net->zero();
}

template <typename T>
EncoderOutput<T> split_encoder_output(const Matrix<T>& out) {
  const std::size_t h = out.cols() / 2;
  EncoderOutput<T> res{Matrix<T>(out.rows(), h), Matrix<T>(out.rows(), h)};
  for (std::size_t r = 0; r < out.rows(); ++r) {
    auto src = out.row(r);
    std::copy(src.begin(), src.begin() + h, res.mu.row(r).begin());
    std::copy(src.begin() + h, src.end(), res.log_sigma_raw.row(r).begin());
  }
  return res;
}

template <typename T>
GaussianParams<T> expert_posterior(const MmvaeModel<T>& model, Modality m,
                                   std::span<const Index> row) {
  const auto& enc = model.encoder(m);
  const auto x = normalized_indicator_rows<T>({row}, enc.in_dim());
  const auto out = split_encoder_output(enc.predict(x));
  GaussianParams<T> params;
  params.mu.assign(out.mu.row(0).begin(), out.mu.row(0).end());
  params.sigma.resize(params.mu.size());
  auto ls = out.log_sigma_raw.row(0);
  for (std::size_t d = 0; d < ls.size(); ++d) {
    params.sigma[d] = static_cast<T>(
        std::exp(std::clamp<double>(ls[d], kLogSigmaMin, kLogSigmaMax)));
  }
  return params;
}

template <typename T>
std::vector<T> MixturePosterior<T>::mean() const {
  if (experts.empty()) throw ContractViolation("empty mixture");
  if (experts.size() == 1) return experts.front().params.mu;
  std::vector<double> acc(experts.front().params.dim(), 0.0);
  for (const auto& e : experts) {
    for (std::size_t d = 0; d < acc.size(); ++d) acc[d] += e.weight * e.params.mu[d];
  }
  return {acc.begin(), acc.end()};
}

template <typename T>
MixturePosterior<T> encode(const MmvaeModel<T>& model, OptionalRow r,
                           OptionalRow k) {
  if (!r && !k) {
    throw ContractViolation("encode: at least one modality must be observed");
  }
  MixturePosterior<T> mix;
  const double weight = (r && k) ? 0.5 : 1.0;
  if (r) {
    mix.experts.push_back({Modality::kInteractions, weight,
                           expert_posterior(model, Modality::kInteractions, *r)});
  }
  if (k) {
    mix.experts.push_back({Modality::kKeyphrases, weight,
                           expert_posterior(model, Modality::kKeyphrases, *k)});
  }
  return mix;
}

#define CRITIQ_INSTANTIATE(T)                                                 \
  template struct MmvaeModel<T>;                                              \
  template struct ModelGradients<T>;                                          \
  template struct MixturePosterior<T>;                                        \
  template EncoderOutput<T> split_encoder_output(const Matrix<T>&);           \
  template GaussianParams<T> expert_posterior(const MmvaeModel<T>&, Modality, \
                                              std::span<const Index>);        \
  template MixturePosterior<T> encode(const MmvaeModel<T>&, OptionalRow,      \
                                      OptionalRow);

CRITIQ_INSTANTIATE(float)
CRITIQ_INSTANTIATE(double)

#undef CRITIQ_INSTANTIATE

}  // namespace critiq
