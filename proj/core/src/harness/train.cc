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


#include "asgcap/harness/train.h"

#include <chrono>
#include <numeric>
#include <random>

#include "asgcap/common/error.h"
#include "asgcap/harness/dataset.h"
#include "asgcap/numcore/adam.h"
#include "asgcap/numcore/checkpoint.h"
#include "asgcap/numcore/ops.h"

namespace asgcap::harness {

void TrainConfig::validate() const {
  if (dim == 0 || batch == 0 || max_len == 0 || beam == 0) {
    throw ContractError("train config: dim, batch, max_len and beam must be positive");
  }
  if (!(learning_rate > 0.0)) throw ContractError("train config: learning rate must be positive");
  if (epochs < 0) throw ContractError("train config: epochs must be nonnegative");
  if (mrgcn && layers < 1) throw ContractError("train config: mrgcn needs at least one layer");
  if (!content_attn && !flow_attn) {
    throw ContractError("train config: content and flow attention cannot both be off");
  }
}

dec::ModelConfig TrainConfig::model_config(const synth::Vocabulary& vocab) const {
  validate();
  dec::ModelConfig m;
  m.dim = dim;
  m.layers = mrgcn ? layers : 0;
  m.vocab_size = vocab.size();
  m.bos = synth::Vocabulary::kBos;
  m.eos = synth::Vocabulary::kEos;
  m.max_len = max_len;
  m.role_embed = role_embed;
  m.content_attn = content_attn;
  m.flow_attn = flow_attn;
  m.graph_update = graph_update;
  m.beam_search = beam_search;
  return m;
}

nlohmann::json TrainConfig::to_json() const {
  return {{"dim", dim},
          {"layers", layers},
          {"learning_rate", learning_rate},
          {"batch", batch},
          {"epochs", epochs},
          {"seed", seed},
          {"max_len", max_len},
          {"beam", beam},
          {"role_embed", role_embed},
          {"mrgcn", mrgcn},
          {"content_attn", content_attn},
          {"flow_attn", flow_attn},
          {"graph_update", graph_update},
          {"beam_search", beam_search}};
}

TrainConfig TrainConfig::from_json(const nlohmann::json& doc) {
  try {
    TrainConfig c;
    c.dim = doc.value("dim", c.dim);
    c.layers = doc.value("layers", c.layers);
    c.learning_rate = doc.value("learning_rate", c.learning_rate);
    c.batch = doc.value("batch", c.batch);
    c.epochs = doc.value("epochs", c.epochs);
    c.seed = doc.value("seed", c.seed);
    c.max_len = doc.value("max_len", c.max_len);
    c.beam = doc.value("beam", c.beam);
    c.role_embed = doc.value("role_embed", c.role_embed);
    c.mrgcn = doc.value("mrgcn", c.mrgcn);
    c.content_attn = doc.value("content_attn", c.content_attn);
    c.flow_attn = doc.value("flow_attn", c.flow_attn);
    c.graph_update = doc.value("graph_update", c.graph_update);
    c.beam_search = doc.value("beam_search", c.beam_search);
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& ex) {
    throw ContractError(std::string("malformed train config: ") + ex.what());
  }
}

TrainResult train(dec::CaptionModel& model, const std::vector<synth::Triplet>& data,
                  const synth::Vocabulary& vocab, const TrainConfig& cfg,
                  const EpochCallback& on_epoch) {
  cfg.validate();
  if (data.empty()) throw ContractError("train: empty dataset");
  std::vector<std::vector<int>> targets;
  for (const auto& t : data) targets.push_back(vocab.encode(t.caption));

  num::AdamState adam;
  adam.learning_rate = cfg.learning_rate;
  auto params = model.params().pointers();
  std::mt19937_64 rng(cfg.seed);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);

  TrainResult result;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    double epoch_tokens = 0.0;
    std::size_t batch_index = 0;
    for (std::size_t b0 = 0; b0 < order.size(); b0 += cfg.batch, ++batch_index) {
      const std::size_t b1 = std::min(order.size(), b0 + cfg.batch);
      double tokens = 0.0;
      for (std::size_t i = b0; i < b1; ++i) tokens += static_cast<double>(targets[order[i]].size() + 1);
      model.params().zero_grad();
      try {
        for (std::size_t i = b0; i < b1; ++i) {
          const auto& t = data[order[i]];
          num::Tape tape;
          num::Var loss = model.loss(tape, t.asg, t.features, targets[order[i]]);
          epoch_loss += loss.item();
          tape.backward(num::scalar_mul(loss, 1.0 / tokens));
        }
        num::adam_step(adam, params);
      } catch (const NumericError& ex) {
        throw NumericError("training diverged at epoch " + std::to_string(epoch) + ", batch " +
                           std::to_string(batch_index) + ": " + ex.what());
      }
      epoch_tokens += tokens;
    }
    EpochStats stats;
    stats.epoch = epoch;
    stats.loss_per_token = epoch_loss / epoch_tokens;
    stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.curve.push_back(stats);
    if (on_epoch) on_epoch(stats);
  }
  return result;
}

double evaluate_loss(dec::CaptionModel& model, const std::vector<synth::Triplet>& data,
                     const synth::Vocabulary& vocab) {
  if (data.empty()) throw ContractError("evaluate_loss: empty dataset");
  double total = 0.0;
  double tokens = 0.0;
  for (const auto& t : data) {
    const auto y = vocab.encode(t.caption);
    num::Tape tape;
    total += model.loss(tape, t.asg, t.features, y).item();
    tokens += static_cast<double>(y.size() + 1);
  }
  return total / tokens;
}

void save_checkpoint(const std::filesystem::path& dir, const dec::CaptionModel& model,
                     const TrainConfig& cfg, const synth::Vocabulary& vocab) {
  num::save_parameters(dir, model.params());
  write_json(dir / "config.json", {{"model", model.config().to_json()}, {"train", cfg.to_json()}});
  write_json(dir / "vocab.json", vocab.to_json());
}

Checkpoint load_checkpoint(const std::filesystem::path& dir) {
  const auto config = read_json(dir / "config.json");
  if (!config.contains("model") || !config.contains("train")) {
    throw ContractError("checkpoint config.json needs model and train sections");
  }
  const auto mcfg = dec::ModelConfig::from_json(config.at("model"));
  auto tcfg = TrainConfig::from_json(config.at("train"));
  auto vocab = synth::Vocabulary::from_json(read_json(dir / "vocab.json"));
  if (vocab.size() != mcfg.vocab_size) {
    throw ContractError("checkpoint vocabulary has " + std::to_string(vocab.size()) +
                        " tokens, model expects " + std::to_string(mcfg.vocab_size));
  }
  return {dec::CaptionModel(mcfg, num::load_parameters(dir)), tcfg, std::move(vocab)};
}

}  // namespace asgcap::harness
