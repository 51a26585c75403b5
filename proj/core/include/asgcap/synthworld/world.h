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

#ifndef ASGCAP_SYNTHWORLD_WORLD_H_
#define ASGCAP_SYNTHWORLD_WORLD_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "asgcap/asg/graph.h"
#include "asgcap/encoder/features.h"
#include "asgcap/synthworld/geometry.h"
#include "asgcap/synthworld/vocab.h"

namespace asgcap::synth {

struct WorldConfig {
  int num_object_classes = 12;
  int num_attribute_classes = 8;
  // The first min(4, n) relation classes are spatial: left-of, right-of,
  // above, below. The rest are sampled freely.
  int num_relation_classes = 6;
  int feature_dim = 64;
  // Norm of the Gaussian noise added to each feature vector (per-coordinate
  // sigma is noise_scale / sqrt(d)).
  double noise_scale = 0.1;
  int min_objects = 2;
  int max_objects = 6;
  int max_attributes = 3;
  int max_relations = 4;
  // Fraction of ordered class pairs that "naturally" relate.
  double affinity_density = 0.3;
  std::uint64_t prototype_seed = 7;

  void validate() const;
  nlohmann::json to_json() const;
  static WorldConfig from_json(const nlohmann::json& doc);
};

struct SceneObject {
  int cls = 0;
  std::vector<int> attributes;  // sorted ascending, distinct
  Box box;
};

struct SceneRelation {
  int subject = 0;
  int predicate = 0;
  int object = 0;
};

struct Scene {
  std::vector<SceneObject> objects;
  std::vector<SceneRelation> relations;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
  static Scene from_json(const nlohmann::json& doc);
};

struct Triplet {
  asg::AbstractSceneGraph asg;
  enc::FeatureBundle features;
  std::vector<std::string> caption;
};

struct AsgSamplingOptions {
  int max_relations = 2;
  int max_standalone = 2;
  // 0 disables the caption-length cap.
  std::size_t max_tokens = 16;
};

inline constexpr int kNumSpatialRelations = 4;

// The synthetic world: class prototypes, relation affinities and the caption
// grammar. Everything is a pure function of the config and the seeds passed
// in.
class World {
 public:
  explicit World(WorldConfig cfg);

  const WorldConfig& config() const { return cfg_; }
  const Vocabulary& vocab() const { return vocab_; }
  std::size_t feature_dim() const { return static_cast<std::size_t>(cfg_.feature_dim); }

  std::span<const double> object_prototype(int cls) const;
  std::span<const double> attribute_prototype(int cls) const;
  std::span<const double> relation_prototype(int cls) const;
  bool affinity(int subject_cls, int object_cls) const;
  bool is_spatial(int predicate) const;

  Scene gen_scene(std::uint64_t seed) const;

  std::vector<double> object_feature(const Scene& scene, int object) const;
  enc::FeatureBundle features_for(const Scene& scene, const asg::AbstractSceneGraph& g) const;

  // Grammar: every relationship clause reads "the [attrs] CLASS REL the
  // [attrs] CLASS"; objects seen earlier come back as "that CLASS"; objects
  // outside any relationship get "there is a [attrs] CLASS". Clauses join
  // with "and".
  std::vector<std::string> render_caption(const Scene& scene,
                                          const asg::AbstractSceneGraph& g) const;
  Triplet make_triplet(const Scene& scene, const asg::AbstractSceneGraph& sub) const;

  // Every object with all of its attributes and every relation.
  asg::AbstractSceneGraph full_asg(const Scene& scene) const;
  // Random grounded sub-ASG whose rendered caption fits the options.
  asg::AbstractSceneGraph random_grounded_asg(const Scene& scene, std::mt19937_64& rng,
                                              const AsgSamplingOptions& opts = {}) const;

  // Spatial predicate implied by the two boxes' centers.
  int spatial_predicate(const Box& subject, const Box& object) const;

 private:
  WorldConfig cfg_;
  Vocabulary vocab_;
  std::vector<std::vector<double>> object_protos_;
  std::vector<std::vector<double>> attribute_protos_;
  std::vector<std::vector<double>> relation_protos_;
  std::vector<std::vector<bool>> affinity_;
};

}  // namespace asgcap::synth

#endif  // ASGCAP_SYNTHWORLD_WORLD_H_
