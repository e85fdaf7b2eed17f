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

#include "critiq/critique/blenders.hpp"

#include "critiq/error.hpp"

namespace critiq {

Latent embed_critique(const MmvaeModel<float>& model, Index keyphrase) {
  if (keyphrase >= model.enc_k.in_dim()) {
    throw ContractViolation("keyphrase index " + std::to_string(keyphrase) +
                            " out of range");
  }
  const Index row[] = {keyphrase};
  return expert_posterior(model, Modality::kKeyphrases, std::span<const Index>(row)).mu;
}

Matrix<float> embed_all_keyphrases(const MmvaeModel<float>& model) {
  const std::size_t n_k = model.enc_k.in_dim();
  const std::size_t h = model.dec_r.in_dim();
  Matrix<float> out(n_k, h);
  for (Index c = 0; c < n_k; ++c) {
    const auto z = embed_critique(model, c);
    std::copy(z.begin(), z.end(), out.row(c).begin());
  }
  return out;
}

Latent mean_latent(std::span<const Latent> vectors) {
  if (vectors.empty()) throw ContractViolation("mean of an empty latent list");
  const std::size_t d = vectors.front().size();
  std::vector<double> acc(d, 0.0);
  for (const auto& v : vectors) {
    if (v.size() != d) throw ContractViolation("latent widths differ");
    for (std::size_t j = 0; j < d; ++j) acc[j] += v[j];
  }
  Latent out(d);
  for (std::size_t j = 0; j < d; ++j) {
    out[j] = static_cast<float>(acc[j] / static_cast<double>(vectors.size()));
  }
  return out;
}

GateBlender::GateBlender(BlendGate<float> gate, Composition composition)
    : gate_(std::move(gate)), composition_(composition) {}

Latent GateBlender::combine(std::span<const float> z0,
                            std::span<const Latent> critiques) const {
  if (critiques.empty()) return {z0.begin(), z0.end()};
  if (composition_ == Composition::kAverageThenBlend) {
    const auto avg = mean_latent(critiques);
    return blend<float>(gate_, z0, avg);
  }
  Latent z(z0.begin(), z0.end());
  for (const auto& c : critiques) z = blend<float>(gate_, z, c);
  return z;
}

Latent UacBlender::combine(std::span<const float> z0,
                           std::span<const Latent> critiques) const {
  std::vector<Latent> all;
  all.reserve(critiques.size() + 1);
  all.emplace_back(z0.begin(), z0.end());
  all.insert(all.end(), critiques.begin(), critiques.end());
  return mean_latent(all);
}

Latent BacBlender::combine(std::span<const float> z0,
                           std::span<const Latent> critiques) const {
  if (critiques.empty()) return {z0.begin(), z0.end()};
  const Latent pair[] = {Latent(z0.begin(), z0.end()), mean_latent(critiques)};
  return mean_latent(pair);
}

}  // namespace critiq
