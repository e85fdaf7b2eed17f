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
#include <string>

#include "critiq/critique/blender_trainer.hpp"
#include "critiq/data/dataset.hpp"
#include "critiq/model/trainer.hpp"

namespace critiq::testing {

inline constexpr std::size_t kToyUsers = 200;
inline constexpr std::size_t kToyItems = 100;
inline constexpr std::size_t kToyKeyphrases = 20;
inline constexpr std::size_t kToyClusters = 4;

struct ToyModel {
  Dataset dataset;
  TrainingConfig config;
  MmvaeModel<float> model;
  TrainingReport report;
};

Dataset toy_dataset(std::uint64_t seed);

// Toy data and a model trained with the toy preset; the dataset, model and
// mask share `seed`. A null mask observes everything.
ToyModel train_toy(std::uint64_t seed, const ModalityMask* mask = nullptr,
                   std::size_t epochs = 0);

// Seed-1 fixture, trained once per process.
const ToyModel& shared_toy();

// Gate trained with the toy blender preset.
BlendGate<float> train_toy_gate(const ToyModel& toy, std::uint64_t seed,
                                BlenderReport* report = nullptr);

// Fresh scratch directory under the build tree (or the system temp dir).
std::filesystem::path scratch_dir(const std::string& name);

}  // namespace critiq::testing
