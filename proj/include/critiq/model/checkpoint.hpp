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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "critiq/data/dataset.hpp"
#include "critiq/model/mmvae.hpp"
#include "critiq/model/trainer.hpp"

namespace critiq {

inline constexpr int kCheckpointVersion = 1;

struct NamedTensor {
  std::string name;
  Matrix<float> value;
};

// Extra tensor section appended after the model; `tag` is exactly six bytes.
struct CheckpointSection {
  std::string tag;
  nlohmann::json header = nlohmann::json::object();
  std::vector<NamedTensor> tensors;
};

struct Checkpoint {
  int version = kCheckpointVersion;
  TrainingConfig config;
  ModelDims dims;
  std::string ids_digest;
  MmvaeModel<float> model;
  std::vector<CheckpointSection> sections;

  const CheckpointSection* section(const std::string& tag) const;
};

// Optional checks applied on load.
struct CheckpointExpectations {
  std::optional<ModelDims> dims;
  std::optional<std::string> ids_digest;
};

nlohmann::json to_json(const TrainingConfig& config);
TrainingConfig training_config_from_json(const nlohmann::json& j);

// FNV-1a over the user, item and keyphrase id lists.
std::string ids_digest(const Dataset& dataset);

// FNV-1a over the raw bytes of every parameter, in checkpoint order.
std::string parameter_digest(const MmvaeModel<float>& model);
std::string tensor_digest(const std::vector<NamedTensor>& tensors);

std::vector<NamedTensor> model_tensors(const MmvaeModel<float>& model);

void save_checkpoint(const Checkpoint& checkpoint,
                     const std::filesystem::path& path);

// Throws CheckpointError on bad magic, version, truncation or failed
// expectations.
Checkpoint load_checkpoint(const std::filesystem::path& path,
                           const CheckpointExpectations& expect = {});

}  // namespace critiq
