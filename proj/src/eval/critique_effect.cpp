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

#include "critiq/eval/critique_effect.hpp"

#include <algorithm>
#include <cmath>

#include "critiq/error.hpp"
#include "critiq/eval/metrics.hpp"
#include "critiq/model/inference.hpp"

namespace critiq {
namespace {

constexpr double kZ95 = 1.959963984540054;

IndexList ranked_indices(const std::vector<ScoredIndex>& scored) {
  IndexList out;
  out.reserve(scored.size());
  for (const auto& s : scored) out.push_back(s.index);
  return out;
}

}  // namespace

Interval mean_interval(const std::vector<double>& values) {
  Interval out;
  if (values.empty()) return out;
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / n;
  double sq = 0.0;
  for (double v : values) sq += (v - out.mean) * (v - out.mean);
  const double sd = values.size() > 1 ? std::sqrt(sq / (n - 1.0)) : 0.0;
  const double half = kZ95 * sd / std::sqrt(n);
  out.low = out.mean - half;
  out.high = out.mean + half;
  return out;
}

Interval proportion_interval(std::size_t successes, std::size_t trials) {
  Interval out;
  if (trials == 0) return out;
  const double n = static_cast<double>(trials);
  out.mean = static_cast<double>(successes) / n;
  const double half = kZ95 * std::sqrt(out.mean * (1.0 - out.mean) / n);
  out.low = std::max(0.0, out.mean - half);
  out.high = std::min(1.0, out.mean + half);
  return out;
}

CritiqueEffect critique_effect(const MmvaeModel<float>& model, const Blender& blender,
                               const Dataset& dataset,
                               const CritiqueEffectConfig& config) {
  if (config.cutoff == 0) throw ContractViolation("cutoff must be positive");
  IndexList users;
  for (std::size_t u = 0; u < dataset.n_users(); ++u) {
    if (!dataset.r_train.row(u).empty()) users.push_back(static_cast<Index>(u));
  }
  CritiqueEffect out;
  if (users.empty()) return out;

  const auto carriers = dataset.k_item.transpose();
  Rng rng(config.seed);
  std::uniform_int_distribution<std::size_t> pick_user(0, users.size() - 1);
  std::vector<double> values;
  std::size_t attempts = 0;
  while (values.size() < config.samples) {
    if (++attempts > 100 * config.samples + 1000) {
      throw ContractViolation("critique_effect: no critiquable keyphrases found");
    }
    const Index u = users[pick_user(rng)];
    const auto train = dataset.r_train.row(u);
    const auto z0 = latent_mean(model, train, std::nullopt);
    const auto before =
        ranked_indices(rank_scores(decode(model, Modality::kInteractions, z0), train));

    IndexList options;
    for (std::size_t k = 0; k < std::min(config.cutoff, before.size()); ++k) {
      options = set_union(options, dataset.k_item.row(before[k]));
    }
    if (options.empty()) continue;
    const Index c =
        options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];

    IndexList affected;
    for (Index i : carriers.row(c)) {
      if (!sorted_contains(train, i)) affected.push_back(i);
    }
    if (affected.empty()) continue;

    const Latent zc = embed_critique(model, c);
    const auto z1 = blender.combine(z0, std::span<const Latent>(&zc, 1));
    const auto after =
        ranked_indices(rank_scores(decode(model, Modality::kInteractions, z1), train));
    const double v = f_map(before, after, affected, config.cutoff);
    values.push_back(v);
    out.samples.push_back({u, c, v});
  }
  out.f_map = mean_interval(values);
  return out;
}

nlohmann::json to_json(const Interval& i) {
  return {{"mean", i.mean}, {"ci95_low", i.low}, {"ci95_high", i.high}};
}

}  // namespace critiq
