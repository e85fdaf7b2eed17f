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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "critiq/critique/blenders.hpp"
#include "critiq/data/dataset.hpp"
#include "critiq/eval/critique_effect.hpp"

namespace critiq {

enum class Strategy { kRandom, kPop, kDiff };

std::string to_string(Strategy s);
// Accepts random, pop, diff (case-insensitive); throws ValidationError.
Strategy parse_strategy(std::string_view name);

struct SimulationConfig {
  Strategy strategy = Strategy::kRandom;
  std::size_t top_n = 10;
  std::size_t max_steps = 10;
  std::size_t pool = 300;          // sampled candidates incl. target; 0 = full catalog
  std::size_t diff_window = 10;    // items inspected by the Diff strategy
  std::size_t max_sessions = 0;    // 0 = every (user, test item) pair
  std::uint64_t seed = 1;

  void validate() const;
};

struct SessionOutcome {
  Index user;
  Index target;
  bool success = false;
  std::size_t length = 0;                 // critiques applied
  std::vector<std::size_t> ranks;         // 1-based target rank per step
  std::vector<std::optional<Index>> critiques;  // empty at step 0
};

// Context shared by every session of a run.
struct SimulationContext {
  const MmvaeModel<float>& model;
  const Blender& blender;
  const Dataset& dataset;
  Matrix<float> keyphrase_latents;
  std::vector<std::size_t> keyphrase_popularity;

  SimulationContext(const MmvaeModel<float>& model, const Blender& blender,
                    const Dataset& dataset);
};

// Picks a keyphrase from `candidates` (non-empty, sorted). `top_items` is
// the current ranking head used by Diff.
Index select_critique(Strategy strategy, std::span<const Index> candidates,
                      std::span<const Index> top_items,
                      const SparseBinaryMatrix& k_item,
                      std::span<const std::size_t> popularity, Rng& rng);

SessionOutcome simulate_session(const SimulationContext& ctx, Index user, Index target,
                                const SimulationConfig& config, Rng& rng);

struct SimulationReport {
  SimulationConfig config;
  std::string blender;
  std::size_t sessions = 0;
  Interval success_rate;
  Interval session_length;
  std::vector<SessionOutcome> outcomes;
};

SimulationReport run_simulation(const MmvaeModel<float>& model, const Blender& blender,
                                const Dataset& dataset, const SimulationConfig& config);

nlohmann::json to_json(const SimulationReport& report);

// Rows of (user, target, step, critique, target_rank) with external ids;
// the step-0 critique column is empty.
void write_trace_csv(const SimulationReport& report, const Dataset& dataset,
                     const std::filesystem::path& path);

}  // namespace critiq
