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

#include <functional>
#include <vector>

#include <json.hpp>

#include "critiq/data/dataset.hpp"
#include "critiq/eval/metrics.hpp"
#include "critiq/model/mmvae.hpp"

namespace critiq {

enum class EvalSplit { kValidation, kTest };

// Which modalities the model sees for each user at evaluation time.
enum class EvalInput { kInteractions, kKeyphrases, kBoth };

struct EvaluationReport {
  RankingMetrics recommendation;
  RankingMetrics explanation;
  std::size_t users = 0;              // users with held-out positives
  std::size_t explained_users = 0;    // users with a non-empty target set
};

// Item and keyphrase scores for one user.
using ItemScorer = std::function<std::vector<float>(Index user)>;

// Averages metrics over users with held-out positives. Training items (and
// validation items when evaluating on test) are excluded from the ranking.
// The explanation target is the union of keyphrases of the held-out items.
EvaluationReport evaluate_scorers(const Dataset& dataset, EvalSplit split,
                                  const ItemScorer& items,
                                  const ItemScorer& keyphrases = {});

EvaluationReport evaluate(const MmvaeModel<float>& model, const Dataset& dataset,
                          EvalSplit split = EvalSplit::kTest,
                          EvalInput input = EvalInput::kInteractions);

// Item popularity in the training split, with the matching keyphrase
// popularity as the explanation.
EvaluationReport evaluate_popularity(const Dataset& dataset,
                                     EvalSplit split = EvalSplit::kTest);

nlohmann::json to_json(const RankingMetrics& m);
nlohmann::json to_json(const EvaluationReport& r);

}  // namespace critiq
