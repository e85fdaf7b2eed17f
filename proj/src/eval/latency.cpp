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

#include "critiq/eval/latency.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "critiq/error.hpp"
#include "critiq/model/inference.hpp"

namespace critiq {
namespace {

double percentile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

LatencyReport latency_probe(const MmvaeModel<float>& model, const Blender& blender,
                            std::size_t n_critiques, std::size_t warmup,
                            std::uint64_t seed) {
  if (n_critiques == 0) throw ContractViolation("latency probe needs critiques");
  const auto dims = model.dims();
  Rng rng(seed);
  std::uniform_int_distribution<Index> pick(0, static_cast<Index>(dims.n_keyphrases - 1));
  std::normal_distribution<float> normal(0.0f, 1.0f);
  Latent z0(dims.latent);
  for (float& v : z0) v = normal(rng);

  volatile float sink = 0.0f;
  const auto one = [&](Index c) {
    const Latent zc = embed_critique(model, c);
    const auto z = blender.combine(z0, std::span<const Latent>(&zc, 1));
    const auto scores = decode(model, Modality::kInteractions, z);
    sink = sink + scores.front();
  };
  for (std::size_t w = 0; w < warmup; ++w) one(pick(rng));

  std::vector<double> ms;
  ms.reserve(n_critiques);
  for (std::size_t i = 0; i < n_critiques; ++i) {
    const Index c = pick(rng);
    const auto start = std::chrono::steady_clock::now();
    one(c);
    const auto stop = std::chrono::steady_clock::now();
    ms.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
  }

  LatencyReport r;
  r.critiques = n_critiques;
  r.latent = dims.latent;
  r.n_items = dims.n_items;
  double sum = 0.0;
  for (double v : ms) sum += v;
  r.mean_ms = sum / static_cast<double>(ms.size());
  double sq = 0.0;
  for (double v : ms) sq += (v - r.mean_ms) * (v - r.mean_ms);
  r.std_ms = ms.size() > 1 ? std::sqrt(sq / static_cast<double>(ms.size() - 1)) : 0.0;
  std::sort(ms.begin(), ms.end());
  r.p50_ms = percentile(ms, 0.5);
  r.p95_ms = percentile(ms, 0.95);
  r.p99_ms = percentile(ms, 0.99);
  r.max_ms = ms.back();
  return r;
}

nlohmann::json to_json(const LatencyReport& r) {
  return {{"critiques", r.critiques}, {"latent", r.latent},   {"n_items", r.n_items},
          {"mean_ms", r.mean_ms},     {"std_ms", r.std_ms},   {"p50_ms", r.p50_ms},
          {"p95_ms", r.p95_ms},       {"p99_ms", r.p99_ms},   {"max_ms", r.max_ms}};
}

}  // namespace critiq
