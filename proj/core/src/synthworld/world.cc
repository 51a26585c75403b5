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

#include "asgcap/synthworld/world.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "asgcap/common/error.h"

namespace asgcap::synth {
namespace {

using asg::AbstractSceneGraph;
using asg::NodeRole;

const std::vector<std::string> kObjectWords = {"ball", "cat",  "dog",  "mat",  "cup",  "box",
                                               "tree", "car",  "bird", "lamp", "book", "chair"};
const std::vector<std::string> kAttributeWords = {"red",   "blue",   "green",  "small",
                                                  "large", "wooden", "shiny",  "striped"};
const std::vector<std::string> kRelationWords = {"left-of", "right-of", "above",
                                                 "below",   "holding",  "watching"};

std::vector<std::string> words(const std::vector<std::string>& base, int n,
                               const std::string& fallback) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) {
    out.push_back(i < static_cast<int>(base.size()) ? base[static_cast<std::size_t>(i)]
                                                    : fallback + std::to_string(i));
  }
  return out;
}

std::vector<double> unit_vector(std::mt19937_64& rng, std::size_t d) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(d);
  double norm = 0.0;
  for (double& x : v) {
    x = normal(rng);
    norm += x * x;
  }
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

// Independent stream for one (scene, tag, index) triple.
std::mt19937_64 noise_stream(std::uint64_t scene_seed, std::uint32_t tag, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(scene_seed), static_cast<std::uint32_t>(scene_seed >> 32),
                    tag, static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

void add_noise(std::vector<double>& v, double noise_scale, std::mt19937_64 rng) {
  if (noise_scale <= 0.0) return;
  std::normal_distribution<double> normal(0.0, noise_scale / std::sqrt(static_cast<double>(v.size())));
  for (double& x : v) x += normal(rng);
}

void axpy(std::vector<double>& y, double a, std::span<const double> x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

}  // namespace

void WorldConfig::validate() const {
  if (num_object_classes < 2 || num_attribute_classes < 2 || num_relation_classes < 2) {
    throw ContractError("world config: class counts must be at least 2");
  }
  if (noise_scale < 0.0) throw ContractError("world config: noise scale must be nonnegative");
  if (feature_dim < 1) throw ContractError("world config: feature dim must be positive");
  if (min_objects < 2 || max_objects < min_objects) {
    throw ContractError("world config: need 2 <= min_objects <= max_objects");
  }
  if (max_attributes < 0 || max_relations < 1) {
    throw ContractError("world config: bad attribute/relation caps");
  }
}

nlohmann::json WorldConfig::to_json() const {
  return {{"num_object_classes", num_object_classes},
          {"num_attribute_classes", num_attribute_classes},
          {"num_relation_classes", num_relation_classes},
          {"feature_dim", feature_dim},
          {"noise_scale", noise_scale},
          {"min_objects", min_objects},
          {"max_objects", max_objects},
          {"max_attributes", max_attributes},
          {"max_relations", max_relations},
          {"affinity_density", affinity_density},
          {"prototype_seed", prototype_seed}};
}

WorldConfig WorldConfig::from_json(const nlohmann::json& doc) {
  WorldConfig c;
  c.num_object_classes = doc.value("num_object_classes", c.num_object_classes);
  c.num_attribute_classes = doc.value("num_attribute_classes", c.num_attribute_classes);
  c.num_relation_classes = doc.value("num_relation_classes", c.num_relation_classes);
  c.feature_dim = doc.value("feature_dim", c.feature_dim);
  c.noise_scale = doc.value("noise_scale", c.noise_scale);
  c.min_objects = doc.value("min_objects", c.min_objects);
  c.max_objects = doc.value("max_objects", c.max_objects);
  c.max_attributes = doc.value("max_attributes", c.max_attributes);
  c.max_relations = doc.value("max_relations", c.max_relations);
  c.affinity_density = doc.value("affinity_density", c.affinity_density);
  c.prototype_seed = doc.value("prototype_seed", c.prototype_seed);
  c.validate();
  return c;
}

nlohmann::json Scene::to_json() const {
  nlohmann::json objs = nlohmann::json::array();
  for (const auto& o : objects) {
    objs.push_back({{"class", o.cls},
                    {"attributes", o.attributes},
                    {"box", {o.box.x, o.box.y, o.box.w, o.box.h}}});
  }
  nlohmann::json rels = nlohmann::json::array();
  for (const auto& r : relations) rels.push_back({r.subject, r.predicate, r.object});
  return {{"seed", seed}, {"objects", objs}, {"relations", rels}};
}

Scene Scene::from_json(const nlohmann::json& doc) {
  try {
    Scene s;
    s.seed = doc.at("seed").get<std::uint64_t>();
    for (const auto& o : doc.at("objects")) {
      SceneObject obj;
      obj.cls = o.at("class").get<int>();
      obj.attributes = o.at("attributes").get<std::vector<int>>();
      const auto b = o.at("box").get<std::vector<double>>();
      if (b.size() != 4) throw ContractError("scene box must have 4 numbers");
      obj.box = {b[0], b[1], b[2], b[3]};
      s.objects.push_back(std::move(obj));
    }
    for (const auto& r : doc.at("relations")) {
      s.relations.push_back({r.at(0).get<int>(), r.at(1).get<int>(), r.at(2).get<int>()});
    }
    return s;
  } catch (const nlohmann::json::exception& ex) {
    throw ContractError(std::string("malformed scene JSON: ") + ex.what());
  }
}

World::World(WorldConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  vocab_ = Vocabulary(words(kObjectWords, cfg_.num_object_classes, "object"),
                      words(kAttributeWords, cfg_.num_attribute_classes, "attr"),
                      words(kRelationWords, cfg_.num_relation_classes, "rel"));
  std::mt19937_64 rng(cfg_.prototype_seed);
  const auto d = feature_dim();
  for (int i = 0; i < cfg_.num_object_classes; ++i) object_protos_.push_back(unit_vector(rng, d));
  for (int i = 0; i < cfg_.num_attribute_classes; ++i) {
    attribute_protos_.push_back(unit_vector(rng, d));
  }
  for (int i = 0; i < cfg_.num_relation_classes; ++i) {
    relation_protos_.push_back(unit_vector(rng, d));
  }
  std::bernoulli_distribution related(cfg_.affinity_density);
  affinity_.assign(static_cast<std::size_t>(cfg_.num_object_classes),
                   std::vector<bool>(static_cast<std::size_t>(cfg_.num_object_classes), false));
  for (auto& row : affinity_) {
    for (std::size_t j = 0; j < row.size(); ++j) row[j] = related(rng);
  }
}

std::span<const double> World::object_prototype(int cls) const {
  return object_protos_.at(static_cast<std::size_t>(cls));
}
std::span<const double> World::attribute_prototype(int cls) const {
  return attribute_protos_.at(static_cast<std::size_t>(cls));
}
std::span<const double> World::relation_prototype(int cls) const {
  return relation_protos_.at(static_cast<std::size_t>(cls));
}

bool World::affinity(int subject_cls, int object_cls) const {
  return affinity_.at(static_cast<std::size_t>(subject_cls))
      .at(static_cast<std::size_t>(object_cls));
}

bool World::is_spatial(int predicate) const {
  return predicate < std::min(kNumSpatialRelations, cfg_.num_relation_classes);
}

int World::spatial_predicate(const Box& subject, const Box& object) const {
  const double dx = object.center_x() - subject.center_x();
  const double dy = object.center_y() - subject.center_y();
  const bool vertical_available = cfg_.num_relation_classes >= kNumSpatialRelations;
  if (!vertical_available || std::abs(dx) >= std::abs(dy)) return dx > 0.0 ? 0 : 1;
  // Image y grows downward: a smaller center-y is "above".
  return dy > 0.0 ? 2 : 3;
}

Scene World::gen_scene(std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  Scene scene;
  scene.seed = seed;
  const int n = std::uniform_int_distribution<int>(cfg_.min_objects, cfg_.max_objects)(rng);
  std::uniform_int_distribution<int> cls_dist(0, cfg_.num_object_classes - 1);
  std::uniform_real_distribution<double> size_dist(0.1, 0.4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int attr_cap = std::min(cfg_.max_attributes, cfg_.num_attribute_classes);
  for (int i = 0; i < n; ++i) {
    SceneObject obj;
    obj.cls = cls_dist(rng);
    const int k = std::uniform_int_distribution<int>(0, attr_cap)(rng);
    std::vector<int> pool(static_cast<std::size_t>(cfg_.num_attribute_classes));
    std::iota(pool.begin(), pool.end(), 0);
    std::shuffle(pool.begin(), pool.end(), rng);
    obj.attributes.assign(pool.begin(), pool.begin() + k);
    std::sort(obj.attributes.begin(), obj.attributes.end());
    obj.box.w = size_dist(rng);
    obj.box.h = size_dist(rng);
    obj.box.x = unit(rng) * (1.0 - obj.box.w);
    obj.box.y = unit(rng) * (1.0 - obj.box.h);
    scene.objects.push_back(std::move(obj));
  }

  const int pairs = n * (n - 1) / 2;
  const int target = std::uniform_int_distribution<int>(1, std::min(cfg_.max_relations, pairs))(rng);
  std::vector<std::vector<bool>> used(static_cast<std::size_t>(n),
                                      std::vector<bool>(static_cast<std::size_t>(n), false));
  const int spatial = std::min(kNumSpatialRelations, cfg_.num_relation_classes);
  std::bernoulli_distribution pick_spatial(0.5);
  for (int r = 0; r < target; ++r) {
    std::vector<std::pair<int, int>> cand;
    std::vector<double> weight;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j || used[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) continue;
        cand.emplace_back(i, j);
        const bool aff = affinity(scene.objects[static_cast<std::size_t>(i)].cls,
                                  scene.objects[static_cast<std::size_t>(j)].cls);
        weight.push_back(aff ? 1.0 : 0.05);
      }
    }
    const auto [s, o] = cand[std::discrete_distribution<std::size_t>(weight.begin(), weight.end())(rng)];
    used[static_cast<std::size_t>(s)][static_cast<std::size_t>(o)] = true;
    used[static_cast<std::size_t>(o)][static_cast<std::size_t>(s)] = true;
    int predicate;
    const bool has_free = cfg_.num_relation_classes > spatial;
    if (!has_free || pick_spatial(rng)) {
      predicate = spatial_predicate(scene.objects[static_cast<std::size_t>(s)].box,
                                    scene.objects[static_cast<std::size_t>(o)].box);
    } else {
      predicate = std::uniform_int_distribution<int>(spatial, cfg_.num_relation_classes - 1)(rng);
    }
    scene.relations.push_back({s, predicate, o});
  }
  return scene;
}

std::vector<double> World::object_feature(const Scene& scene, int object) const {
  if (object < 0 || object >= static_cast<int>(scene.objects.size())) {
    throw ContractError("dangling region reference: object " + std::to_string(object));
  }
  const SceneObject& obj = scene.objects[static_cast<std::size_t>(object)];
  std::vector<double> v(object_prototype(obj.cls).begin(), object_prototype(obj.cls).end());
  for (int a : obj.attributes) axpy(v, 1.0, attribute_prototype(a));
  add_noise(v, cfg_.noise_scale, noise_stream(scene.seed, 1, static_cast<std::uint64_t>(object)));
  return v;
}

enc::FeatureBundle World::features_for(const Scene& scene, const AbstractSceneGraph& g) const {
  asg::require_valid(g, "features_for");
  const std::size_t d = feature_dim();
  enc::FeatureBundle fb;
  fb.nodes = num::Tensor({std::max<std::size_t>(g.size(), 1), d});
  std::unordered_map<int, std::vector<double>> cache;
  auto object_vec = [&](int region) -> const std::vector<double>& {
    auto it = cache.find(region);
    if (it == cache.end()) it = cache.emplace(region, object_feature(scene, region)).first;
    return it->second;
  };
  auto put = [&](int node, const std::vector<double>& v) {
    std::copy(v.begin(), v.end(), fb.nodes.data() + static_cast<std::size_t>(node) * d);
  };

  for (const auto& n : g.nodes()) {
    switch (n.role) {
      case NodeRole::kObject:
        put(n.id, object_vec(n.region));
        break;
      case NodeRole::kAttribute:
        put(n.id, object_vec(g.node(g.owner_of(n.id)).region));
        break;
      case NodeRole::kRelationship: {
        const int sr = g.node(g.subject_of(n.id)).region;
        const int orr = g.node(g.object_of(n.id)).region;
        std::vector<double> v(d, 0.0);
        axpy(v, 0.5, object_vec(sr));
        axpy(v, 0.5, object_vec(orr));
        if (n.region >= 0) {
          if (n.region >= static_cast<int>(scene.relations.size())) {
            throw ContractError("dangling region reference: relation " + std::to_string(n.region));
          }
          axpy(v, 1.0, relation_prototype(scene.relations[static_cast<std::size_t>(n.region)].predicate));
          add_noise(v, cfg_.noise_scale,
                    noise_stream(scene.seed, 2, static_cast<std::uint64_t>(n.region)));
        } else {
          add_noise(v, cfg_.noise_scale,
                    noise_stream(scene.seed, 3, static_cast<std::uint64_t>(sr) * 1024u +
                                                    static_cast<std::uint64_t>(orr)));
        }
        put(n.id, v);
        break;
      }
    }
  }

  fb.global = num::Tensor({d});
  if (!scene.objects.empty()) {
    std::vector<double> mean(d, 0.0);
    for (int i = 0; i < static_cast<int>(scene.objects.size()); ++i) {
      axpy(mean, 1.0 / static_cast<double>(scene.objects.size()), object_vec(i));
    }
    std::copy(mean.begin(), mean.end(), fb.global.data());
  }
  return fb;
}

std::vector<std::string> World::render_caption(const Scene& scene,
                                               const AbstractSceneGraph& g) const {
  asg::require_valid(g, "render_caption");
  auto object_of_region = [&](int region) -> const SceneObject& {
    if (region < 0 || region >= static_cast<int>(scene.objects.size())) {
      throw ContractError("render_caption: dangling object region " + std::to_string(region));
    }
    return scene.objects[static_cast<std::size_t>(region)];
  };

  std::vector<std::string> out;
  std::vector<bool> mentioned(g.size(), false);
  auto mention = [&](int obj, std::string_view det) {
    const SceneObject& so = object_of_region(g.node(obj).region);
    if (mentioned[static_cast<std::size_t>(obj)]) {
      out.emplace_back(kWordThat);
    } else {
      out.emplace_back(det);
      for (int attr : g.attributes_of(obj)) {
        const int pos = g.attribute_position(attr);
        if (pos >= static_cast<int>(so.attributes.size())) {
          throw ContractError("render_caption: attribute node " + std::to_string(attr) +
                              " exceeds the grounded object's attributes");
        }
        out.push_back(vocab_.token(vocab_.attribute_word(so.attributes[static_cast<std::size_t>(pos)])));
      }
      mentioned[static_cast<std::size_t>(obj)] = true;
    }
    out.push_back(vocab_.token(vocab_.object_word(so.cls)));
  };

  std::vector<bool> in_relation(g.size(), false);
  for (int r : g.ids_with_role(NodeRole::kRelationship)) {
    const int s = g.subject_of(r);
    const int o = g.object_of(r);
    const int region = g.node(r).region;
    if (region < 0 || region >= static_cast<int>(scene.relations.size())) {
      throw ContractError("render_caption: relationship node " + std::to_string(r) +
                          " is not grounded in a scene relation");
    }
    const SceneRelation& rel = scene.relations[static_cast<std::size_t>(region)];
    if (rel.subject != g.node(s).region || rel.object != g.node(o).region) {
      throw ContractError("render_caption: relationship node " + std::to_string(r) +
                          " endpoints disagree with its scene relation");
    }
    if (!out.empty()) out.emplace_back(kWordAnd);
    mention(s, kWordThe);
    out.push_back(vocab_.token(vocab_.relation_word(rel.predicate)));
    mention(o, kWordThe);
    in_relation[static_cast<std::size_t>(s)] = true;
    in_relation[static_cast<std::size_t>(o)] = true;
  }
  for (int o : g.ids_with_role(NodeRole::kObject)) {
    if (in_relation[static_cast<std::size_t>(o)]) continue;
    if (!out.empty()) out.emplace_back(kWordAnd);
    out.emplace_back(kWordThere);
    out.emplace_back(kWordIs);
    mention(o, kWordA);
  }
  return out;
}

Triplet World::make_triplet(const Scene& scene, const AbstractSceneGraph& sub) const {
  Triplet t;
  t.caption = render_caption(scene, sub);
  t.features = features_for(scene, sub);
  t.asg = sub;
  return t;
}

AbstractSceneGraph World::full_asg(const Scene& scene) const {
  AbstractSceneGraph g;
  std::vector<int> node_of(scene.objects.size());
  for (std::size_t i = 0; i < scene.objects.size(); ++i) {
    node_of[i] = g.add_object(static_cast<int>(i));
    for (std::size_t a = 0; a < scene.objects[i].attributes.size(); ++a) g.add_attribute(node_of[i]);
  }
  for (std::size_t r = 0; r < scene.relations.size(); ++r) {
    const auto& rel = scene.relations[r];
    g.add_relationship(node_of[static_cast<std::size_t>(rel.subject)],
                       node_of[static_cast<std::size_t>(rel.object)], static_cast<int>(r));
  }
  return g;
}

AbstractSceneGraph World::random_grounded_asg(const Scene& scene, std::mt19937_64& rng,
                                              const AsgSamplingOptions& opts) const {
  const int num_rel = static_cast<int>(scene.relations.size());
  std::vector<int> rel_order(static_cast<std::size_t>(num_rel));
  std::iota(rel_order.begin(), rel_order.end(), 0);
  std::shuffle(rel_order.begin(), rel_order.end(), rng);
  const int rel_cap = opts.max_relations < 0 ? num_rel : std::min(opts.max_relations, num_rel);
  const int k = std::uniform_int_distribution<int>(0, rel_cap)(rng);
  std::vector<int> chosen(rel_order.begin(), rel_order.begin() + k);

  std::vector<int> standalone_pool;
  for (int i = 0; i < static_cast<int>(scene.objects.size()); ++i) {
    const bool used = std::any_of(chosen.begin(), chosen.end(), [&](int r) {
      const auto& rel = scene.relations[static_cast<std::size_t>(r)];
      return rel.subject == i || rel.object == i;
    });
    if (!used) standalone_pool.push_back(i);
  }
  std::shuffle(standalone_pool.begin(), standalone_pool.end(), rng);
  const int stand_cap = opts.max_standalone < 0
                            ? static_cast<int>(standalone_pool.size())
                            : std::min<int>(opts.max_standalone, static_cast<int>(standalone_pool.size()));
  int m = std::uniform_int_distribution<int>(0, stand_cap)(rng);
  if (k == 0 && m == 0) m = 1;
  std::vector<int> standalone(standalone_pool.begin(), standalone_pool.begin() + m);

  std::vector<int> attr_count(scene.objects.size(), 0);
  for (std::size_t i = 0; i < scene.objects.size(); ++i) {
    attr_count[i] = std::uniform_int_distribution<int>(
        0, static_cast<int>(scene.objects[i].attributes.size()))(rng);
  }

  for (;;) {
    AbstractSceneGraph g;
    std::unordered_map<int, int> node_of;
    auto ensure = [&](int obj) {
      if (node_of.contains(obj)) return;
      const int id = g.add_object(obj);
      node_of[obj] = id;
      for (int a = 0; a < attr_count[static_cast<std::size_t>(obj)]; ++a) g.add_attribute(id);
    };
    for (int r : chosen) {
      ensure(scene.relations[static_cast<std::size_t>(r)].subject);
      ensure(scene.relations[static_cast<std::size_t>(r)].object);
    }
    for (int o : standalone) ensure(o);
    for (int r : chosen) {
      const auto& rel = scene.relations[static_cast<std::size_t>(r)];
      g.add_relationship(node_of[rel.subject], node_of[rel.object], r);
    }
    if (opts.max_tokens == 0 || render_caption(scene, g).size() <= opts.max_tokens) return g;

    std::vector<int> with_attrs;
    for (const auto& [obj, id] : node_of) {
      if (attr_count[static_cast<std::size_t>(obj)] > 0) with_attrs.push_back(obj);
    }
    std::sort(with_attrs.begin(), with_attrs.end());
    if (!with_attrs.empty()) {
      const auto pick = std::uniform_int_distribution<std::size_t>(0, with_attrs.size() - 1)(rng);
      --attr_count[static_cast<std::size_t>(with_attrs[pick])];
    } else if (!standalone.empty() && (standalone.size() > 1 || !chosen.empty())) {
      standalone.pop_back();
    } else if (chosen.size() > 1) {
      chosen.pop_back();
    } else {
      return g;  // a single bare clause; nothing left to trim
    }
  }
}

}  // namespace asgcap::synth
