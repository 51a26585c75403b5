// Copyright 2026 The asgcap Authors. All Rights Reserved.
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


#ifndef ASGCAP_HARNESS_DATASET_H_
#define ASGCAP_HARNESS_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "asgcap/asg/graph.h"
#include "asgcap/synthworld/relclf.h"
#include "asgcap/synthworld/world.h"

namespace asgcap::harness {

struct DatasetConfig {
  synth::WorldConfig world;
  synth::AsgSamplingOptions sampling;
  std::size_t num_train = 2000;
  std::size_t num_test = 500;
  std::uint64_t seed = 1;
  synth::RelClfTrainOptions relclf;

  nlohmann::json to_json() const;
  // Missing keys keep their defaults.
  static DatasetConfig from_json(const nlohmann::json& doc);
};

enum class Split { kTrain, kTest };

struct TripletRecord {
  std::size_t scene_id = 0;
  Split split = Split::kTrain;
  asg::AbstractSceneGraph asg;
  std::vector<std::string> caption;
};

struct Dataset {
  DatasetConfig config;
  std::vector<synth::Scene> scenes;
  std::vector<TripletRecord> triplets;

  std::vector<const TripletRecord*> split(Split s) const;
};

// Seed of scene `index` under master seed `master` (splitmix64 mix).
std::uint64_t scene_seed(std::uint64_t master, std::uint64_t index);

// One scene per triplet; the first num_train triplets are the training split.
Dataset generate_dataset(const synth::World& world, const DatasetConfig& cfg);

// data_dir: dataset.json, world.json, vocab.json, scenes.jsonl, triplets.jsonl.
void save_dataset(const std::filesystem::path& dir, const Dataset& ds, const synth::World& world);
Dataset load_dataset(const std::filesystem::path& dir);

// gen-data: dataset files plus a trained relation classifier in relclf/.
struct GenDataSummary {
  std::size_t scenes = 0;
  std::size_t triplets = 0;
  synth::RelClfTrainResult relclf;
};
GenDataSummary gen_data(const std::filesystem::path& dir, const DatasetConfig& cfg);

synth::Triplet materialize(const synth::World& world, const Dataset& ds, const TripletRecord& rec);

nlohmann::json read_json(const std::filesystem::path& file);
void write_json(const std::filesystem::path& file, const nlohmann::json& doc);

}  // namespace asgcap::harness

#endif  // ASGCAP_HARNESS_DATASET_H_
