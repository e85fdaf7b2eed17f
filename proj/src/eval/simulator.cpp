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

#include "critiq/eval/simulator.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>

#include "critiq/critique/blender_trainer.hpp"
#include "critiq/error.hpp"
#include "critiq/model/inference.hpp"

namespace critiq {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// 1-based position of `target` in the candidate ranking.
std::size_t rank_of(std::span<const float> scores, std::span<const Index> candidates,
                    Index target) {
  const float t = scores[target];
  std::size_t ahead = 0;
  for (Index i : candidates) {
    if (i == target) continue;
    if (scores[i] > t || (scores[i] == t && i < target)) ++ahead;
  }
  return ahead + 1;
}

}  // namespace

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::kRandom: return "random";
    case Strategy::kPop: return "pop";
    case Strategy::kDiff: return "diff";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "random") return Strategy::kRandom;
  if (lower == "pop") return Strategy::kPop;
  if (lower == "diff") return Strategy::kDiff;
  throw ValidationError("unknown strategy '" + std::string(name) + "'");
}

void SimulationConfig::validate() const {
  if (max_steps == 0) throw ValidationError("max_steps must be >= 1");
  if (top_n == 0) throw ValidationError("top_n must be >= 1");
  if (pool == 1) throw ValidationError("pool must be 0 (full) or >= 2");
}

SimulationContext::SimulationContext(const MmvaeModel<float>& model_,
                                     const Blender& blender_, const Dataset& dataset_)
    : model(model_),
      blender(blender_),
      dataset(dataset_),
      keyphrase_latents(critique_latents(model_)),
      keyphrase_popularity(dataset_.k_user.column_counts()) {}

Index select_critique(Strategy strategy, std::span<const Index> candidates,
                      std::span<const Index> top_items,
                      const SparseBinaryMatrix& k_item,
                      std::span<const std::size_t> popularity, Rng& rng) {
  if (candidates.empty()) throw ContractViolation("no candidate keyphrases");
  switch (strategy) {
    case Strategy::kRandom: {
      std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
      return candidates[pick(rng)];
    }
    case Strategy::kPop: {
      std::vector<double> w;
      w.reserve(candidates.size());
      double total = 0.0;
      for (Index c : candidates) {
        w.push_back(static_cast<double>(popularity[c]));
        total += w.back();
      }
      if (total == 0.0) std::fill(w.begin(), w.end(), 1.0);
      std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
      return candidates[pick(rng)];
    }
    case Strategy::kDiff: {
      // Candidates are absent from the target: plain frequency among the top items.
      std::vector<std::size_t> freq(candidates.size(), 0);
      for (Index item : top_items) {
        const auto kps = k_item.row(item);
        for (std::size_t j = 0; j < candidates.size(); ++j) {
          freq[j] += sorted_contains(kps, candidates[j]);
        }
      }
      const auto best = std::max_element(freq.begin(), freq.end());
      return candidates[static_cast<std::size_t>(best - freq.begin())];
    }
  }
  throw ContractViolation("unhandled strategy");
}

SessionOutcome simulate_session(const SimulationContext& ctx, Index user, Index target,
                                const SimulationConfig& config, Rng& rng) {
  const Dataset& ds = ctx.dataset;
  const auto train = ds.r_train.row(user);
  if (train.empty()) throw ContractViolation("simulated user has no training items");

  IndexList pool;
  if (config.pool == 0) {
    for (Index i = 0; i < ds.n_items(); ++i) {
      if (!sorted_contains(train, i) || i == target) pool.push_back(i);
    }
  } else {
    const auto seen = all_positives(ds, user);
    IndexList unseen;
    for (Index i = 0; i < ds.n_items(); ++i) {
      if (!sorted_contains(seen, i)) unseen.push_back(i);
    }
    const std::size_t take = std::min(config.pool - 1, unseen.size());
    std::sample(unseen.begin(), unseen.end(), std::back_inserter(pool), take, rng);
    pool.push_back(target);
    std::sort(pool.begin(), pool.end());
  }

  const auto z0 = latent_mean(ctx.model, train, std::nullopt);
  SessionOutcome out{user, target, false, 0, {}, {}};
  auto scores = decode(ctx.model, Modality::kInteractions, z0);

  const auto target_kps = ds.k_item.row(target);
  IndexList available;
  for (Index c = 0; c < ds.n_keyphrases(); ++c) {
    if (!sorted_contains(target_kps, c)) available.push_back(c);
  }
  std::vector<Latent> embeddings;

  for (std::size_t step = 0;; ++step) {
    const std::size_t rank = rank_of(scores, pool, target);
    out.ranks.push_back(rank);
    out.length = step;
    if (rank <= config.top_n) {
      out.success = true;
      break;
    }
    if (step == config.max_steps || available.empty()) break;

    IndexList head;
    if (config.strategy == Strategy::kDiff) {
      const auto ranked = rank_candidates(scores, pool);
      for (std::size_t k = 0; k < std::min(config.diff_window, ranked.size()); ++k) {
        head.push_back(ranked[k].index);
      }
    }
    const Index c = select_critique(config.strategy, available, head, ds.k_item,
                                    ctx.keyphrase_popularity, rng);
    available.erase(std::lower_bound(available.begin(), available.end(), c));
    if (out.critiques.empty()) out.critiques.push_back(std::nullopt);
    out.critiques.push_back(c);
    const auto zc = ctx.keyphrase_latents.row(c);
    embeddings.emplace_back(zc.begin(), zc.end());
    scores = decode(ctx.model, Modality::kInteractions, ctx.blender.combine(z0, embeddings));
  }
  if (out.critiques.empty()) out.critiques.push_back(std::nullopt);
  return out;
}

SimulationReport run_simulation(const MmvaeModel<float>& model, const Blender& blender,
                                const Dataset& dataset, const SimulationConfig& config) {
  config.validate();
  std::vector<std::pair<Index, Index>> pairs;
  for (std::size_t u = 0; u < dataset.n_users(); ++u) {
    if (dataset.r_train.row(u).empty()) continue;
    for (Index i : dataset.r_test.row(u)) pairs.emplace_back(static_cast<Index>(u), i);
  }
  if (config.max_sessions > 0 && config.max_sessions < pairs.size()) {
    Rng rng(config.seed);
    std::vector<std::pair<Index, Index>> chosen;
    std::sample(pairs.begin(), pairs.end(), std::back_inserter(chosen),
                config.max_sessions, rng);
    pairs = std::move(chosen);
  }

  const SimulationContext ctx(model, blender, dataset);
  SimulationReport report;
  report.config = config;
  report.blender = blender.name();
  report.sessions = pairs.size();
  std::size_t successes = 0;
  std::vector<double> lengths;
  for (std::size_t s = 0; s < pairs.size(); ++s) {
    Rng rng(splitmix64(config.seed ^ splitmix64(s)));
    auto outcome = simulate_session(ctx, pairs[s].first, pairs[s].second, config, rng);
    successes += outcome.success;
    lengths.push_back(static_cast<double>(outcome.length));
    report.outcomes.push_back(std::move(outcome));
  }
  report.success_rate = proportion_interval(successes, pairs.size());
  report.session_length = mean_interval(lengths);
  return report;
}

nlohmann::json to_json(const SimulationReport& r) {
  const auto& c = r.config;
  return {{"config",
           {{"strategy", to_string(c.strategy)},
            {"top_n", c.top_n},
            {"max_steps", c.max_steps},
            {"pool", c.pool == 0 ? nlohmann::json("full") : nlohmann::json(c.pool)},
            {"diff_window", c.diff_window},
            {"max_sessions", c.max_sessions},
            {"seed", c.seed}}},
          {"blender", r.blender},
          {"sessions", r.sessions},
          {"success_rate", to_json(r.success_rate)},
          {"session_length", to_json(r.session_length)}};
}

void write_trace_csv(const SimulationReport& report, const Dataset& dataset,
                     const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write trace " + path.string());
  out << "user,target,step,critique,target_rank\n";
  for (const auto& o : report.outcomes) {
    for (std::size_t s = 0; s < o.ranks.size(); ++s) {
      out << dataset.users.id_of(o.user) << ',' << dataset.items.id_of(o.target) << ','
          << s << ',';
      if (s < o.critiques.size() && o.critiques[s]) {
        out << dataset.keyphrases.id_of(*o.critiques[s]);
      }
      out << ',' << o.ranks[s] << '\n';
    }
  }
}

}  // namespace critiq
