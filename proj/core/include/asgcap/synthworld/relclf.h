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


#ifndef ASGCAP_SYNTHWORLD_RELCLF_H_
#define ASGCAP_SYNTHWORLD_RELCLF_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <vector>

#include "asgcap/asg/graph.h"
#include "asgcap/numcore/parameters.h"
#include "asgcap/numcore/tape.h"
#include "asgcap/synthworld/geometry.h"
#include "asgcap/synthworld/world.h"

namespace asgcap::synth {

inline constexpr std::size_t kNumSpatialFeatures = 5;
using SpatialFeatures = std::array<double, kNumSpatialFeatures>;

// (dcx, dcy, log w_j/w_i, log h_j/h_i, iou), deltas taken j minus i.
SpatialFeatures spatial_features(const Box& i, const Box& j);

// Classes: 0 no relationship, 1 i is subject of j, 2 j is subject of i.
using RelationProbs = std::array<double, 3>;

// Two affine layers with a relu between them over
// [global, f_i, f_j, spatial].
class RelationClassifier {
 public:
  static constexpr std::size_t kHidden = 32;

  RelationClassifier(std::size_t feature_dim, std::uint64_t seed);
  explicit RelationClassifier(num::ParameterSet params);

  std::size_t feature_dim() const { return feature_dim_; }
  std::size_t input_dim() const { return 3 * feature_dim_ + kNumSpatialFeatures; }
  num::ParameterSet& params() { return params_; }
  const num::ParameterSet& params() const { return params_; }

  std::vector<double> input(std::span<const double> global, std::span<const double> fi,
                            std::span<const double> fj, const SpatialFeatures& sp) const;
  // inputs: n x input_dim. Returns n x 3 logits.
  num::Var logits(num::Tape& tape, num::Var inputs);
  RelationProbs classify(std::span<const double> global, std::span<const double> fi,
                         std::span<const double> fj, const SpatialFeatures& sp) const;

  void save(const std::filesystem::path& dir) const;
  static RelationClassifier load(const std::filesystem::path& dir);

 private:
  std::size_t feature_dim_ = 0;
  num::ParameterSet params_;
};

struct RelClfTrainOptions {
  int train_scenes = 600;
  int heldout_scenes = 200;
  int epochs = 40;
  std::size_t batch = 64;
  double learning_rate = 3e-3;
  std::uint64_t seed = 1;
};

struct RelClfTrainResult {
  std::vector<double> loss_curve;
  std::size_t train_examples = 0;
  std::size_t heldout_examples = 0;
  // Mean per-class recall on the held-out set; chance level is 1/3.
  double heldout_balanced_accuracy = 0.0;
};

// Pairs from generated scenes, both orderings, negatives subsampled so the
// classes stand at 2:1:1.
RelClfTrainResult train_relation_classifier(RelationClassifier& clf, const World& world,
                                            const RelClfTrainOptions& opts);

struct Proposal {
  Box box;
  double score = 0.0;
};

// Every true box once with a high score plus one or two displaced duplicates
// with lower scores.
std::vector<Proposal> jitter_proposals(const Scene& scene, std::mt19937_64& rng);

struct AutoAsgOptions {
  // A pair gets a relationship node when P(no relationship) < threshold.
  double relation_threshold = 0.5;
  // Proposals scoring below this after soft-NMS are not objects.
  double detection_threshold = 0.5;
  // Attribute nodes attached per object, capped by what the object has.
  int attributes_per_object = 0;
};

asg::AbstractSceneGraph auto_generate_asg(const World& world, const Scene& scene,
                                          const std::vector<Proposal>& proposals,
                                          const RelationClassifier& clf,
                                          const AutoAsgOptions& opts = {});

}  // namespace asgcap::synth

#endif  // ASGCAP_SYNTHWORLD_RELCLF_H_
