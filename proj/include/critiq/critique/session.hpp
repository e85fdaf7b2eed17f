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

#include <optional>
#include <vector>

#include "critiq/critique/blenders.hpp"
#include "critiq/model/inference.hpp"

namespace critiq {

struct SessionOptions {
  std::size_t top_n = 20;
  std::size_t top_k = 10;  // explanation length
};

struct RankedStep {
  std::optional<Index> critique;  // empty for the opening step
  std::vector<ScoredIndex> items;
  std::vector<ScoredIndex> explanation;
};

// Multi-step critiquing state for one user. The model and blender are
// borrowed and must outlive the session.
class CritiqueSession {
 public:
  CritiqueSession(const MmvaeModel<float>& model, const Blender& blender,
                  Latent base, IndexList exclude, SessionOptions options = {});

  // Appends keyphrase `c` and re-ranks. Throws ValidationError for an
  // unknown keyphrase and SessionClosedError after close().
  const RankedStep& apply(Index c);
  void close() { open_ = false; }
  bool is_open() const { return open_; }

  std::size_t step() const { return critiques_.size(); }
  const std::vector<RankedStep>& history() const { return history_; }
  const std::vector<Index>& critiques() const { return critiques_; }
  const Latent& base_latent() const { return base_; }
  const Latent& current_latent() const { return current_; }
  const IndexList& excluded() const { return exclude_; }

 private:
  RankedStep rank() const;

  const MmvaeModel<float>* model_;
  const Blender* blender_;
  Latent base_;
  Latent current_;
  IndexList exclude_;
  SessionOptions options_;
  std::vector<Index> critiques_;
  std::vector<Latent> embeddings_;
  std::vector<RankedStep> history_;
  bool open_ = true;
};

}  // namespace critiq
