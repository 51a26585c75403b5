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


#ifndef ASGCAP_DECODER_MODEL_H_
#define ASGCAP_DECODER_MODEL_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "asgcap/asg/graph.h"
#include "asgcap/decoder/decoder.h"
#include "asgcap/encoder/encoder.h"
#include "asgcap/encoder/features.h"
#include "asgcap/numcore/parameters.h"

namespace asgcap::dec {

struct ModelConfig {
  std::size_t dim = 64;
  int layers = 2;
  std::size_t positions = 4;
  std::size_t vocab_size = 0;
  int bos = 1;
  // -1 disables termination: every hypothesis runs to max_len.
  int eos = 2;
  std::size_t max_len = 20;
  bool role_embed = true;
  bool content_attn = true;
  bool flow_attn = true;
  bool graph_update = true;
  bool beam_search = true;

  enc::EncoderConfig encoder() const;
  DecoderConfig decoder() const;
  void validate() const;
  nlohmann::json to_json() const;
  static ModelConfig from_json(const nlohmann::json& doc);
};

struct StepTrace {
  int token = 0;
  std::vector<double> alpha;
  std::optional<double> beta;
  std::optional<std::array<double, 3>> flow_mode;
  std::optional<double> sentinel;
};

struct Hypothesis {
  std::vector<int> tokens;  // without <bos>/<eos>
  double log_prob = 0.0;
  bool finished = false;    // ended with <eos>
  std::vector<StepTrace> trace;
};

nlohmann::json trace_to_json(const Hypothesis& h, const std::vector<std::string>& words);

// The encoder and decoder behind one parameter set.
class CaptionModel {
 public:
  // Uniform(-0.1, 0.1) init with LSTM forget biases at 1.
  CaptionModel(ModelConfig cfg, std::uint64_t seed);
  CaptionModel(ModelConfig cfg, num::ParameterSet params);

  const ModelConfig& config() const { return cfg_; }
  num::ParameterSet& params() { return params_; }
  const num::ParameterSet& params() const { return params_; }

  // Teacher-forced -sum_t log p(y_t | y_<t); the target is `caption`
  // followed by <eos>. Records on `tape` with trainable parameters.
  num::Var loss(num::Tape& tape, const asg::AbstractSceneGraph& g, const enc::FeatureBundle& feats,
                const std::vector<int>& caption);

  // Hypotheses sorted by total log-probability, best first, at most `beam`.
  std::vector<Hypothesis> beam_search(const asg::AbstractSceneGraph& g,
                                      const enc::FeatureBundle& feats, std::size_t beam,
                                      std::size_t max_len);
  Hypothesis greedy(const asg::AbstractSceneGraph& g, const enc::FeatureBundle& feats,
                    std::size_t max_len);
  // Beam search of width `beam`, or greedy when the beam_search flag is off.
  Hypothesis caption(const asg::AbstractSceneGraph& g, const enc::FeatureBundle& feats,
                     std::size_t beam);

 private:
  ModelConfig cfg_;
  num::ParameterSet params_;
};

}  // namespace asgcap::dec

#endif  // ASGCAP_DECODER_MODEL_H_
