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

#include "support/fixtures.hpp"

namespace critiq::testing {

Dataset toy_dataset(std::uint64_t seed) {
  return generate_toy_dataset(kToyUsers, kToyItems, kToyKeyphrases, kToyClusters, seed);
}

ToyModel train_toy(std::uint64_t seed, const ModalityMask* mask, std::size_t epochs) {
  ToyModel toy;
  toy.dataset = toy_dataset(seed);
  toy.config = training_preset("toy");
  toy.config.seed = seed;
  if (epochs > 0) toy.config.epochs = epochs;
  toy.model = create_model(toy.dataset, toy.config);
  const auto observed = mask != nullptr ? *mask : full_mask(toy.dataset.n_users());
  toy.report = train(toy.model, toy.dataset, observed, toy.config);
  return toy;
}

const ToyModel& shared_toy() {
  static const ToyModel toy = train_toy(1);
  return toy;
}

BlendGate<float> train_toy_gate(const ToyModel& toy, std::uint64_t seed,
                                BlenderReport* report) {
  auto config = blender_preset("toy");
  config.seed = seed;
  Rng rng(seed);
  auto gate = BlendGate<float>::create(toy.config.latent_dim, rng);
  auto r = train_blender(toy.model, toy.dataset, gate, config);
  if (report != nullptr) *report = std::move(r);
  return gate;
}

std::filesystem::path scratch_dir(const std::string& name) {
#ifdef CRITIQ_TEST_TMP
  std::filesystem::path root = CRITIQ_TEST_TMP;
#else
  std::filesystem::path root = std::filesystem::temp_directory_path() / "critiq-tests";
#endif
  auto dir = root / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace critiq::testing
