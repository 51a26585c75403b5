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


#ifndef ASGCAP_HARNESS_EVAL_H_
#define ASGCAP_HARNESS_EVAL_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "asgcap/decoder/model.h"
#include "asgcap/harness/dataset.h"
#include "asgcap/metrics/report.h"
#include "asgcap/metrics/tuples.h"
#include "asgcap/synthworld/relclf.h"

namespace asgcap::harness {

struct ControlInstance {
  std::size_t scene_id = 0;
  std::vector<std::string> generated;
  std::vector<std::string> reference;
  metrics::TupleCounts generated_counts;
  metrics::TupleCounts reference_counts;
  metrics::GraphStructure structure;
  double div1 = 0.0;
  double div2 = 0.0;
  std::optional<double> self_cider;  // over this instance's beam list
};

struct ControlReport {
  metrics::MetricReport summary;
  // Fraction of instances whose generated count matches the reference, per
  // tuple type.
  double exact_objects = 0.0;
  double exact_attributes = 0.0;
  double exact_relations = 0.0;
  std::vector<ControlInstance> instances;

  nlohmann::json to_json() const;
};

// Decodes every record with its own ASG (beam `beam`, greedy when the model's
// beam flag is off) and scores against the rendered captions.
ControlReport evaluate_control(dec::CaptionModel& model, const synth::World& world,
                               const Dataset& ds, const std::vector<const TripletRecord*>& records,
                               std::size_t beam);

// Scores fixed caption pairs; used for the oracle upper bound.
ControlReport score_captions(const std::vector<std::vector<std::string>>& generated,
                             const std::vector<std::vector<std::string>>& reference,
                             const synth::Vocabulary& vocab);

struct DiversityScene {
  std::size_t scene_id = 0;
  std::size_t distinct_asgs = 0;
  bool fell_back = false;  // no relationship to sample; single-object ASGs used
  std::vector<std::vector<std::string>> captions;
  std::vector<std::vector<std::string>> baseline;
  metrics::MetricReport sampled;
  metrics::MetricReport repeated;
};

struct DiversityReport {
  metrics::MetricReport sampled;
  metrics::MetricReport repeated;
  std::vector<DiversityScene> scenes;

  nlohmann::json to_json() const;
};

struct DiversityOptions {
  std::size_t samples = 5;
  std::size_t beam = 5;
  std::uint64_t seed = 1;
  synth::AutoAsgOptions auto_asg{0.5, 0.5, 1};
  // Captions supplying SelfCIDEr document frequencies, normally the training
  // references. Empty: each caption set is its own corpus.
  std::vector<std::vector<std::string>> df_corpus;
};

// Per scene: auto-generate a global ASG, draw `samples` distinct sampled
// subgraphs (repeats only when the graph has too few), caption each. The
// baseline is the top-`samples` beam list of the first sampled ASG.
DiversityReport evaluate_diversity(dec::CaptionModel& model, const synth::World& world,
                                   const std::vector<synth::Scene>& scenes,
                                   const synth::RelationClassifier& clf,
                                   const DiversityOptions& opts);

struct PerturbationResult {
  std::size_t pairs = 0;
  std::size_t increased = 0;
  double rate() const { return pairs == 0 ? 0.0 : static_cast<double>(increased) / pairs; }
};

// For each record whose scene offers an unused attribute, appends one
// attribute node to an eligible object and checks that the caption's (o, a)
// count goes up. Stops after `max_pairs` pairs.
PerturbationResult attribute_perturbation(dec::CaptionModel& model, const synth::World& world,
                                          const Dataset& ds,
                                          const std::vector<const TripletRecord*>& records,
                                          std::size_t max_pairs, std::size_t beam);

}  // namespace asgcap::harness

#endif  // ASGCAP_HARNESS_EVAL_H_
