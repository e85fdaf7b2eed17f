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
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "critiq/data/sparse_matrix.hpp"

namespace critiq {

// Bijection between external string ids and dense indices, assigned in
// first-appearance order.
class IdMap {
 public:
  IdMap() = default;
  explicit IdMap(std::vector<std::string> ids);

  // Index of `id`, inserting it at the end if unseen.
  Index intern(std::string_view id);
  std::optional<Index> find(std::string_view id) const;
  const std::string& id_of(Index index) const { return ids_.at(index); }

  std::size_t size() const { return ids_.size(); }
  const std::vector<std::string>& ids() const { return ids_; }

  bool operator==(const IdMap& other) const { return ids_ == other.ids_; }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, Index> index_;
};

}  // namespace critiq
