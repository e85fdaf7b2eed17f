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

#include <vector>

#include <json.hpp>

#include "critiq/critique/blenders.hpp"
#include "critiq/data/dataset.hpp"

namespace critiq {

struct Interval {
  double mean = 0.0;
  double low = 0.0;
  double high = 0.0;
};

// Normal-approximation 95% interval of the sample mean.
Interval mean_interval(const std::vector<double>& values);
// Normal-approximation 95% interval of a proportion.
Interval proportion_interval(std::size_t successes, std::size_t trials);

struct CritiqueEffectConfig {
  std::size_t samples = 500;
  std::size_t cutoff = 20;        // MAP cutoff and size of the list critiqued
  std::uint64_t seed = 1;
};

struct CritiqueEffectSample {
  Index user;
  Index critique;
  double f_map;
};

struct CritiqueEffect {
  Interval f_map;
  std::vector<CritiqueEffectSample> samples;
};

// Draws (user, keyphrase) pairs: a random user with training interactions
// and a random keyphrase carried by one of that user's top `cutoff`
// recommendations. F-MAP@cutoff is measured over the non-training items
// carrying the keyphrase.
CritiqueEffect critique_effect(const MmvaeModel<float>& model, const Blender& blender,
                               const Dataset& dataset,
                               const CritiqueEffectConfig& config);

nlohmann::json to_json(const Interval& i);

}  // namespace critiq
