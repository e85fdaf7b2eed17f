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

#include <json.hpp>

#include "critiq/critique/blenders.hpp"

namespace critiq {

struct LatencyReport {
  std::size_t critiques = 0;
  std::size_t latent = 0;
  std::size_t n_items = 0;
  double mean_ms = 0.0;
  double std_ms = 0.0;
  double p50_ms = 0.0;
  double p95_ms = 0.0;
  double p99_ms = 0.0;
  double max_ms = 0.0;
};

// Times embed + blend + decode for one critique at batch size 1, after
// `warmup` untimed runs. Keyphrases are drawn uniformly.
LatencyReport latency_probe(const MmvaeModel<float>& model, const Blender& blender,
                            std::size_t n_critiques, std::size_t warmup = 50,
                            std::uint64_t seed = 1);

nlohmann::json to_json(const LatencyReport& r);

}  // namespace critiq
