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

#include "critiq/critique/session.hpp"

#include <string>

#include "critiq/error.hpp"

namespace critiq {

CritiqueSession::CritiqueSession(const MmvaeModel<float>& model,
                                 const Blender& blender, Latent base,
                                 IndexList exclude, SessionOptions options)
    : model_(&model),
      blender_(&blender),
      base_(std::move(base)),
      current_(base_),
      exclude_(std::move(exclude)),
      options_(options) {
  if (base_.size() != model.dec_r.in_dim()) {
    throw ContractViolation("session base latent has the wrong width");
  }
  history_.push_back(rank());
}

RankedStep CritiqueSession::rank() const {
  RankedStep s;
  s.items = rank_scores(decode(*model_, Modality::kInteractions, current_), exclude_,
                        options_.top_n);
  s.explanation = rank_scores(decode(*model_, Modality::kKeyphrases, current_), {},
                              options_.top_k);
  return s;
}

const RankedStep& CritiqueSession::apply(Index c) {
  if (!open_) throw SessionClosedError("session is closed");
  if (c >= model_->enc_k.in_dim()) {
    throw ValidationError("unknown keyphrase index " + std::to_string(c));
  }
  critiques_.push_back(c);
  embeddings_.push_back(embed_critique(*model_, c));
  current_ = blender_->combine(base_, embeddings_);
  RankedStep s = rank();
  s.critique = c;
  history_.push_back(std::move(s));
  return history_.back();
}

}  // namespace critiq
