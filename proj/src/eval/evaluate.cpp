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

#include "critiq/eval/evaluate.hpp"

#include <string>

#include "critiq/model/inference.hpp"

namespace critiq {
namespace {

IndexList ranked_indices(const std::vector<ScoredIndex>& scored) {
  IndexList out;
  out.reserve(scored.size());
  for (const auto& s : scored) out.push_back(s.index);
  return out;
}

std::vector<float> as_scores(const std::vector<std::size_t>& counts) {
  return {counts.begin(), counts.end()};
}

}  // namespace

EvaluationReport evaluate_scorers(const Dataset& dataset, EvalSplit split,
                                  const ItemScorer& items,
                                  const ItemScorer& keyphrases) {
  const auto& held_out = split == EvalSplit::kTest ? dataset.r_test : dataset.r_val;
  EvaluationReport report;
  for (std::size_t u = 0; u < dataset.n_users(); ++u) {
    const auto relevant = held_out.row(u);
    if (relevant.empty()) continue;
    IndexList exclude(dataset.r_train.row(u).begin(), dataset.r_train.row(u).end());
    if (split == EvalSplit::kTest) exclude = set_union(exclude, dataset.r_val.row(u));

    const auto user = static_cast<Index>(u);
    const auto ranking = ranked_indices(rank_scores(items(user), exclude));
    report.recommendation.add(ranking_metrics(ranking, relevant));
    ++report.users;

    if (!keyphrases) continue;
    IndexList target;
    for (Index i : relevant) target = set_union(target, dataset.k_item.row(i));
    if (target.empty()) continue;
    const auto kp_ranking = ranked_indices(rank_scores(keyphrases(user)));
    report.explanation.add(ranking_metrics(kp_ranking, target));
    ++report.explained_users;
  }
  if (report.users > 0) report.recommendation.scale(1.0 / report.users);
  if (report.explained_users > 0) report.explanation.scale(1.0 / report.explained_users);
  return report;
}

EvaluationReport evaluate(const MmvaeModel<float>& model, const Dataset& dataset,
                          EvalSplit split, EvalInput input) {
  const auto latent = [&](Index u) {
    const auto r = dataset.r_train.row(u);
    const auto k = dataset.k_user.row(u);
    OptionalRow r_in, k_in;
    if (input != EvalInput::kKeyphrases && !r.empty()) r_in = r;
    if (input != EvalInput::kInteractions && !k.empty()) k_in = k;
    if (!r_in && !k_in) {
      // Nothing observed: fall back to the prior mean.
      return std::vector<float>(model.dec_r.in_dim(), 0.0f);
    }
    return latent_mean(model, r_in, k_in);
  };
  const ItemScorer items = [&](Index u) {
    return decode(model, Modality::kInteractions, latent(u));
  };
  const ItemScorer keyphrases = [&](Index u) {
    return decode(model, Modality::kKeyphrases, latent(u));
  };
  return evaluate_scorers(dataset, split, items, keyphrases);
}

EvaluationReport evaluate_popularity(const Dataset& dataset, EvalSplit split) {
  const auto item_scores = as_scores(dataset.r_train.column_counts());
  const auto kp_scores = as_scores(dataset.k_user.column_counts());
  return evaluate_scorers(
      dataset, split, [&](Index) { return item_scores; },
      [&](Index) { return kp_scores; });
}

nlohmann::json to_json(const RankingMetrics& m) {
  nlohmann::json j = {{"r_precision", m.r_precision}, {"ndcg", m.ndcg}};
  for (std::size_t c = 0; c < kCutoffs.size(); ++c) {
    const auto n = std::to_string(kCutoffs[c]);
    j["map@" + n] = m.map[c];
    j["precision@" + n] = m.precision[c];
    j["recall@" + n] = m.recall[c];
  }
  return j;
}

nlohmann::json to_json(const EvaluationReport& r) {
  return {{"users", r.users},
          {"recommendation", to_json(r.recommendation)},
          {"explained_users", r.explained_users},
          {"explanation", to_json(r.explanation)}};
}

}  // namespace critiq
