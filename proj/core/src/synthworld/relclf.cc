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


#include "asgcap/synthworld/relclf.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "asgcap/common/error.h"
#include "asgcap/numcore/adam.h"
#include "asgcap/numcore/checkpoint.h"
#include "asgcap/numcore/ops.h"
#include "asgcap/synthworld/soft_nms.h"

namespace asgcap::synth {
namespace {

using num::Tensor;
using num::Var;

struct Example {
  std::vector<double> x;
  std::size_t label = 0;
};

std::vector<double> mean_object_feature(const World& world,
                                        const std::vector<std::vector<double>>& feats) {
  std::vector<double> g(world.feature_dim(), 0.0);
  for (const auto& f : feats) {
    for (std::size_t k = 0; k < g.size(); ++k) g[k] += f[k] / static_cast<double>(feats.size());
  }
  return g;
}

// Balanced 2:1:1 examples from the scenes seeded [seed0, seed0 + n).
std::vector<Example> make_examples(const RelationClassifier& clf, const World& world,
                                   std::uint64_t seed0, int n, std::mt19937_64& rng) {
  std::vector<Example> pos1, pos2, neg;
  for (int s = 0; s < n; ++s) {
    const Scene scene = world.gen_scene(seed0 + static_cast<std::uint64_t>(s));
    std::vector<std::vector<double>> feats;
    for (int i = 0; i < static_cast<int>(scene.objects.size()); ++i) {
      feats.push_back(world.object_feature(scene, i));
    }
    const auto global = mean_object_feature(world, feats);
    std::map<std::pair<int, int>, bool> rel;
    for (const auto& r : scene.relations) rel[{r.subject, r.object}] = true;
    for (int i = 0; i < static_cast<int>(scene.objects.size()); ++i) {
      for (int j = 0; j < static_cast<int>(scene.objects.size()); ++j) {
        if (i == j) continue;
        Example e;
        e.x = clf.input(global, feats[static_cast<std::size_t>(i)], feats[static_cast<std::size_t>(j)],
                        spatial_features(scene.objects[static_cast<std::size_t>(i)].box,
                                         scene.objects[static_cast<std::size_t>(j)].box));
        if (rel.contains({i, j})) {
          e.label = 1;
          pos1.push_back(std::move(e));
        } else if (rel.contains({j, i})) {
          e.label = 2;
          pos2.push_back(std::move(e));
        } else {
          neg.push_back(std::move(e));
        }
      }
    }
  }
  std::shuffle(neg.begin(), neg.end(), rng);
  neg.resize(std::min(neg.size(), pos1.size() + pos2.size()));
  std::vector<Example> all;
  for (auto* v : {&neg, &pos1, &pos2}) {
    for (auto& e : *v) all.push_back(std::move(e));
  }
  return all;
}

}  // namespace

SpatialFeatures spatial_features(const Box& i, const Box& j) {
  return {j.center_x() - i.center_x(), j.center_y() - i.center_y(), std::log(j.w / i.w),
          std::log(j.h / i.h), iou(i, j)};
}

RelationClassifier::RelationClassifier(std::size_t feature_dim, std::uint64_t seed)
    : feature_dim_(feature_dim) {
  if (feature_dim == 0) throw ContractError("relation classifier: feature dim must be positive");
  params_.add("rel.w1", {input_dim(), kHidden});
  params_.add("rel.b1", {kHidden});
  params_.add("rel.w2", {kHidden, 3});
  params_.add("rel.b2", {3});
  std::mt19937_64 rng(seed);
  params_.init_uniform(rng, 0.1);
}

RelationClassifier::RelationClassifier(num::ParameterSet params) : params_(std::move(params)) {
  for (const char* name : {"rel.w1", "rel.b1", "rel.w2", "rel.b2"}) {
    if (!params_.contains(name)) {
      throw ContractError(std::string("relation classifier: missing parameter ") + name);
    }
  }
  const auto& w1 = params_.get("rel.w1");
  if (w1.rank() != 2 || w1.rows() < kNumSpatialFeatures ||
      (w1.rows() - kNumSpatialFeatures) % 3 != 0 || w1.cols() != kHidden ||
      params_.get("rel.w2").shape() != num::Shape{kHidden, 3} ||
      params_.get("rel.b2").shape() != num::Shape{3}) {
    throw ContractError("relation classifier: parameter shapes do not fit the architecture");
  }
  feature_dim_ = (w1.rows() - kNumSpatialFeatures) / 3;
}

std::vector<double> RelationClassifier::input(std::span<const double> global,
                                              std::span<const double> fi,
                                              std::span<const double> fj,
                                              const SpatialFeatures& sp) const {
  if (global.size() != feature_dim_ || fi.size() != feature_dim_ || fj.size() != feature_dim_) {
    throw ContractError("relation classifier: feature size mismatch");
  }
  std::vector<double> x;
  x.reserve(input_dim());
  x.insert(x.end(), global.begin(), global.end());
  x.insert(x.end(), fi.begin(), fi.end());
  x.insert(x.end(), fj.begin(), fj.end());
  x.insert(x.end(), sp.begin(), sp.end());
  return x;
}

Var RelationClassifier::logits(num::Tape& tape, Var inputs) {
  Var h = num::relu(num::add_row(num::matmul(inputs, tape.parameter(params_.get("rel.w1"))),
                                 tape.parameter(params_.get("rel.b1"))));
  return num::add_row(num::matmul(h, tape.parameter(params_.get("rel.w2"))),
                      tape.parameter(params_.get("rel.b2")));
}

RelationProbs RelationClassifier::classify(std::span<const double> global,
                                           std::span<const double> fi, std::span<const double> fj,
                                           const SpatialFeatures& sp) const {
  const auto x = input(global, fi, fj, sp);
  const auto w1 = params_.get("rel.w1").values();
  const auto b1 = params_.get("rel.b1").values();
  const auto w2 = params_.get("rel.w2").values();
  const auto b2 = params_.get("rel.b2").values();
  std::array<double, kHidden> h{};
  for (std::size_t k = 0; k < kHidden; ++k) h[k] = b1[k];
  for (std::size_t p = 0; p < x.size(); ++p) {
    for (std::size_t k = 0; k < kHidden; ++k) h[k] += x[p] * w1[p * kHidden + k];
  }
  RelationProbs z{b2[0], b2[1], b2[2]};
  for (std::size_t k = 0; k < kHidden; ++k) {
    const double a = std::max(h[k], 0.0);
    for (std::size_t c = 0; c < 3; ++c) z[c] += a * w2[k * 3 + c];
  }
  const double mx = *std::max_element(z.begin(), z.end());
  double total = 0.0;
  for (double& v : z) {
    v = std::exp(v - mx);
    total += v;
  }
  for (double& v : z) v /= total;
  return z;
}

void RelationClassifier::save(const std::filesystem::path& dir) const {
  num::save_parameters(dir, params_);
}

RelationClassifier RelationClassifier::load(const std::filesystem::path& dir) {
  return RelationClassifier(num::load_parameters(dir));
}

RelClfTrainResult train_relation_classifier(RelationClassifier& clf, const World& world,
                                            const RelClfTrainOptions& opts) {
  if (opts.train_scenes < 1 || opts.heldout_scenes < 1 || opts.batch == 0 || opts.epochs < 0) {
    throw ContractError("relation classifier training: bad options");
  }
  if (clf.feature_dim() != world.feature_dim()) {
    throw ContractError("relation classifier training: feature dim differs from the world");
  }
  std::mt19937_64 rng(opts.seed);
  const std::uint64_t base = opts.seed * 1000003ULL;
  auto train = make_examples(clf, world, base, opts.train_scenes, rng);
  const auto heldout =
      make_examples(clf, world, base + static_cast<std::uint64_t>(opts.train_scenes),
                    opts.heldout_scenes, rng);
  if (train.empty()) throw ContractError("relation classifier training: no examples");

  RelClfTrainResult result;
  result.train_examples = train.size();
  result.heldout_examples = heldout.size();
  num::AdamState adam;
  adam.learning_rate = opts.learning_rate;
  auto params = clf.params().pointers();
  const std::size_t in = clf.input_dim();
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t b0 = 0; b0 < order.size(); b0 += opts.batch) {
      const std::size_t n = std::min(opts.batch, order.size() - b0);
      Tensor x({n, in});
      for (std::size_t r = 0; r < n; ++r) {
        const auto& e = train[order[b0 + r]];
        std::copy(e.x.begin(), e.x.end(), x.data() + r * in);
      }
      num::Tape tape;
      Var z = clf.logits(tape, tape.constant(std::move(x)));
      std::vector<Var> losses;
      for (std::size_t r = 0; r < n; ++r) {
        losses.push_back(num::cross_entropy(num::embedding(z, r), train[order[b0 + r]].label));
      }
      Var loss = num::scalar_mul(num::sum(num::concat(losses)), 1.0 / static_cast<double>(n));
      clf.params().zero_grad();
      tape.backward(loss);
      num::adam_step(adam, params);
      epoch_loss += loss.item() * static_cast<double>(n);
    }
    result.loss_curve.push_back(epoch_loss / static_cast<double>(train.size()));
  }

  std::array<double, 3> hit{}, seen{};
  const std::size_t d = clf.feature_dim();
  for (const auto& e : heldout) {
    std::span<const double> x(e.x);
    SpatialFeatures sp;
    std::copy(x.begin() + static_cast<std::ptrdiff_t>(3 * d), x.end(), sp.begin());
    const auto p = clf.classify(x.subspan(0, d), x.subspan(d, d), x.subspan(2 * d, d), sp);
    const auto pred = static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
    seen[e.label] += 1.0;
    if (pred == e.label) hit[e.label] += 1.0;
  }
  double acc = 0.0;
  int classes = 0;
  for (std::size_t c = 0; c < 3; ++c) {
    if (seen[c] > 0.0) {
      acc += hit[c] / seen[c];
      ++classes;
    }
  }
  result.heldout_balanced_accuracy = classes > 0 ? acc / classes : 0.0;
  return result;
}

std::vector<Proposal> jitter_proposals(const Scene& scene, std::mt19937_64& rng) {
  std::normal_distribution<double> shift(0.0, 1.0);
  std::uniform_real_distribution<double> true_score(0.7, 1.0);
  std::uniform_real_distribution<double> dup_score(0.2, 0.8);
  std::uniform_int_distribution<int> dups(1, 2);
  auto displace = [&](const Box& b, double frac) {
    Box o = b;
    o.x = std::clamp(b.x + frac * b.w * shift(rng), 0.0, 1.0 - b.w);
    o.y = std::clamp(b.y + frac * b.h * shift(rng), 0.0, 1.0 - b.h);
    return o;
  };
  std::vector<Proposal> out;
  for (const auto& obj : scene.objects) {
    out.push_back({displace(obj.box, 0.02), true_score(rng)});
    const int k = dups(rng);
    for (int i = 0; i < k; ++i) out.push_back({displace(obj.box, 0.1), dup_score(rng)});
  }
  return out;
}

asg::AbstractSceneGraph auto_generate_asg(const World& world, const Scene& scene,
                                          const std::vector<Proposal>& proposals,
                                          const RelationClassifier& clf,
                                          const AutoAsgOptions& opts) {
  std::vector<Box> boxes;
  std::vector<double> scores;
  for (const auto& p : proposals) {
    boxes.push_back(p.box);
    scores.push_back(p.score);
  }
  std::vector<int> grounded;
  for (const auto& kept : soft_nms(boxes, scores)) {
    if (kept.score < opts.detection_threshold) continue;
    int best = -1;
    double best_iou = 0.0;
    for (int i = 0; i < static_cast<int>(scene.objects.size()); ++i) {
      const double o = iou(kept.box, scene.objects[static_cast<std::size_t>(i)].box);
      if (o > best_iou) {
        best_iou = o;
        best = i;
      }
    }
    if (best >= 0 && std::find(grounded.begin(), grounded.end(), best) == grounded.end()) {
      grounded.push_back(best);
    }
  }
  std::sort(grounded.begin(), grounded.end());

  asg::AbstractSceneGraph g;
  std::vector<int> node;
  std::vector<std::vector<double>> feats;
  for (int obj : grounded) {
    node.push_back(g.add_object(obj));
    const int n_attr = std::min<int>(opts.attributes_per_object,
                                     static_cast<int>(scene.objects[static_cast<std::size_t>(obj)].attributes.size()));
    for (int a = 0; a < n_attr; ++a) g.add_attribute(node.back());
  }
  for (int i = 0; i < static_cast<int>(scene.objects.size()); ++i) {
    feats.push_back(world.object_feature(scene, i));
  }
  const auto global = mean_object_feature(world, feats);
  for (std::size_t a = 0; a < grounded.size(); ++a) {
    for (std::size_t b = a + 1; b < grounded.size(); ++b) {
      const auto oi = static_cast<std::size_t>(grounded[a]);
      const auto oj = static_cast<std::size_t>(grounded[b]);
      const auto p = clf.classify(global, feats[oi], feats[oj],
                                  spatial_features(scene.objects[oi].box, scene.objects[oj].box));
      if (!(p[0] < opts.relation_threshold)) continue;
      const bool forward = p[1] >= p[2];
      const int s = forward ? grounded[a] : grounded[b];
      const int o = forward ? grounded[b] : grounded[a];
      int region = asg::kNoRegion;
      for (std::size_t r = 0; r < scene.relations.size(); ++r) {
        if (scene.relations[r].subject == s && scene.relations[r].object == o) {
          region = static_cast<int>(r);
          break;
        }
      }
      g.add_relationship(forward ? node[a] : node[b], forward ? node[b] : node[a], region);
    }
  }
  return g;
}

}  // namespace asgcap::synth
