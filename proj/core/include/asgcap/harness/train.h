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


#ifndef ASGCAP_HARNESS_TRAIN_H_
#define ASGCAP_HARNESS_TRAIN_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include <nlohmann/json.hpp>

#include "asgcap/decoder/model.h"
#include "asgcap/synthworld/vocab.h"
#include "asgcap/synthworld/world.h"

namespace asgcap::harness {

struct TrainConfig {
  std::size_t dim = 64;
  int layers = 2;
  double learning_rate = 1e-3;
  std::size_t batch = 32;
  int epochs = 30;
  std::uint64_t seed = 1;
  std::size_t max_len = 20;
  std::size_t beam = 5;
  bool role_embed = true;
  bool mrgcn = true;
  bool content_attn = true;
  bool flow_attn = true;
  bool graph_update = true;
  bool beam_search = true;

  void validate() const;
  dec::ModelConfig model_config(const synth::Vocabulary& vocab) const;
  nlohmann::json to_json() const;
  static TrainConfig from_json(const nlohmann::json& doc);
};

struct EpochStats {
  int epoch = 0;
  double loss_per_token = 0.0;
  double seconds = 0.0;
};

struct TrainResult {
  std::vector<EpochStats> curve;
};

using EpochCallback = std::function<void(const EpochStats&)>;

// Minibatch Adam on the teacher-forced loss. Each batch minimizes the summed
// token loss divided by the batch's token count. Shuffling is seeded by
// cfg.seed. A non-finite value anywhere aborts with NumericError naming the
// epoch and batch.
TrainResult train(dec::CaptionModel& model, const std::vector<synth::Triplet>& data,
                  const synth::Vocabulary& vocab, const TrainConfig& cfg,
                  const EpochCallback& on_epoch = {});

// Mean teacher-forced loss per token over `data`, without updates.
double evaluate_loss(dec::CaptionModel& model, const std::vector<synth::Triplet>& data,
                     const synth::Vocabulary& vocab);

// ckpt dir: manifest.json + weights.bin, config.json {model, train}, vocab.json.
void save_checkpoint(const std::filesystem::path& dir, const dec::CaptionModel& model,
                     const TrainConfig& cfg, const synth::Vocabulary& vocab);

struct Checkpoint {
  dec::CaptionModel model;
  TrainConfig train;
  synth::Vocabulary vocab;
};
Checkpoint load_checkpoint(const std::filesystem::path& dir);

}  // namespace asgcap::harness

#endif  // ASGCAP_HARNESS_TRAIN_H_
