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


#include <algorithm>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "asgcap/asg/graph.h"
#include "asgcap/asg/multirel.h"
#include "asgcap/common/error.h"
#include "asgcap/encoder/encoder.h"
#include "asgcap/numcore/gradcheck.h"
#include "asgcap/numcore/ops.h"

namespace asgcap::enc {
namespace {

using asg::AbstractSceneGraph;
using asg::NodeRole;
using num::ParamBinder;
using num::ParameterSet;
using num::Tape;
using num::Tensor;

void fill(Tensor& t, std::mt19937_64& rng, double scale = 0.5) {
  std::uniform_real_distribution<double> u(-scale, scale);
  for (double& v : t.values()) v = u(rng);
}

Tensor random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng) {
  Tensor t({r, c});
  fill(t, rng, 1.0);
  return t;
}

FeatureBundle random_features(std::size_t n, std::size_t d, std::mt19937_64& rng) {
  FeatureBundle f{random_matrix(n, d, rng), Tensor({d})};
  fill(f.global, rng, 1.0);
  return f;
}

AbstractSceneGraph sample_graph() {
  AbstractSceneGraph g;
  const int a = g.add_object(0);
  g.add_attribute(a);
  g.add_attribute(a);
  const int b = g.add_object(1);
  g.add_relationship(a, b, 0);
  g.add_attribute(b);
  return g;
}

TEST(RoleEmbedTest, SpecExamples) {
  EncoderConfig cfg{.dim = 3, .layers = 0, .positions = 2, .role_embed = true};
  ParameterSet ps;
  add_encoder_parameters(ps, cfg);
  Tensor& role = ps.get("enc.role");
  Tensor& pos = ps.get("enc.pos");
  std::mt19937_64 rng(1);
  fill(role, rng);
  fill(pos, rng);
  for (std::size_t c = 0; c < 3; ++c) {
    role.at(0, c) = 1.0;
    pos.at(0, c) = -role.at(1, c);
  }
  AbstractSceneGraph g;
  const int o = g.add_object(0);
  g.add_attribute(o);
  const int p = g.add_object(1);
  g.add_relationship(o, p);
  Tensor v({4, 3}, 1.0);
  for (std::size_t c = 0; c < 3; ++c) v.at(3, c) = 0.0;
  Tape tape;
  ParamBinder bind(tape, ps, false);
  const auto x = role_embed(bind, g, tape.constant(v), cfg).value();
  for (std::size_t c = 0; c < 3; ++c) {
    EXPECT_DOUBLE_EQ(x.at(0, c), 1.0);
    EXPECT_DOUBLE_EQ(x.at(1, c), 0.0);
    EXPECT_DOUBLE_EQ(x.at(3, c), 0.0);
  }
}

TEST(RoleEmbedTest, AttributeOrderBeyondTableIsRejected) {
  EncoderConfig cfg{.dim = 2, .layers = 0, .positions = 1, .role_embed = true};
  ParameterSet ps;
  add_encoder_parameters(ps, cfg);
  AbstractSceneGraph g;
  const int o = g.add_object(0);
  g.add_attribute(o);
  g.add_attribute(o);
  Tape tape;
  ParamBinder bind(tape, ps, false);
  EXPECT_THROW(role_embed(bind, g, tape.constant(Tensor({3, 2}, 1.0)), cfg), ContractError);
}

// Same visual feature, different roles: the rows differ wherever the role
// scales differ and the feature is nonzero.
TEST(RoleEmbedTest, ObjectAndAttributeDiffer) {
  EncoderConfig cfg{.dim = 4, .layers = 0, .positions = 4, .role_embed = true};
  ParameterSet ps;
  add_encoder_parameters(ps, cfg);
  std::mt19937_64 rng(2);
  fill(ps.get("enc.role"), rng);
  fill(ps.get("enc.pos"), rng);
  AbstractSceneGraph g;
  g.add_attribute(g.add_object(0));
  Tensor v({2, 4});
  const std::vector<double> feat = {0.3, 0.0, -1.2, 0.7};
  for (std::size_t c = 0; c < 4; ++c) v.at(0, c) = v.at(1, c) = feat[c];
  Tape tape;
  ParamBinder bind(tape, ps, false);
  const auto x = role_embed(bind, g, tape.constant(v), cfg).value();
  const Tensor& role = ps.get("enc.role");
  const Tensor& pos = ps.get("enc.pos");
  for (std::size_t c = 0; c < 4; ++c) {
    const bool differ = feat[c] != 0.0 && role.at(0, c) != role.at(1, c) + pos.at(0, c);
    EXPECT_EQ(x.at(0, c) != x.at(1, c), differ) << c;
  }
}

TEST(MrgcnTest, IsolatedNodeAndZeroRelationWeights) {
  EncoderConfig cfg{.dim = 3, .layers = 1, .positions = 4, .role_embed = false};
  ParameterSet ps;
  add_encoder_parameters(ps, cfg);
  std::mt19937_64 rng(3);
  for (std::size_t i = 0; i < ps.size(); ++i) fill(ps.at(i), rng);
  for (auto kind : asg::kAllRelationKinds) {
    for (double& w : ps.get(layer_parameter(0, asg::relation_kind_name(kind))).values()) w = 0.0;
  }
  const AbstractSceneGraph g = sample_graph();
  const Tensor x = random_matrix(g.size(), 3, rng);
  Tape tape;
  ParamBinder bind(tape, ps, false);
  const auto y = mrgcn_layer(bind, asg::build_multirel(g), tape.constant(x), 0).value();
  const Tensor& w0 = ps.get("enc.l0.self");
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t c = 0; c < 3; ++c) {
      double acc = 0.0;
      for (std::size_t k = 0; k < 3; ++k) acc += x.at(i, k) * w0.at(k, c);
      EXPECT_NEAR(y.at(i, c), std::max(0.0, acc), 1e-14);
    }
  }
}

// o1 -> a1 with d = 2 and small integer weights, worked by hand:
//   x = [[1, 2], [3, -1]]
//   o1: x_o W0 + x_a W_attr_obj = [1,2]W0 + [3,-1]Wao
//   a1: x_a W0 + x_o W_obj_attr = [3,-1]W0 + [1,2]Woa
TEST(MrgcnTest, TwoNodePencilExample) {
  EncoderConfig cfg{.dim = 2, .layers = 1, .positions = 4, .role_embed = false};
  ParameterSet ps;
  add_encoder_parameters(ps, cfg);
  auto set = [&](const std::string& name, std::vector<double> w) {
    std::copy(w.begin(), w.end(), ps.get(name).data());
  };
  set("enc.l0.self", {1, 0, 0, 1});      // identity
  set("enc.l0.attr_obj", {0, 1, 1, 0});  // swap
  set("enc.l0.obj_attr", {2, 0, 0, -1});
  AbstractSceneGraph g;
  g.add_attribute(g.add_object(0));
  Tape tape;
  ParamBinder bind(tape, ps, false);
  const auto y = mrgcn_layer(bind, asg::build_multirel(g),
                             tape.constant(Tensor::matrix(2, 2, {1, 2, 3, -1})), 0)
                     .value();
  // o1: [1,2] + [-1,3] = [0,5]; a1: [3,-1] + [2,-2] = [5,-3] -> relu [5,0].
  EXPECT_DOUBLE_EQ(y.at(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(y.at(0, 1), 5.0);
  EXPECT_DOUBLE_EQ(y.at(1, 0), 5.0);
  EXPECT_DOUBLE_EQ(y.at(1, 1), 0.0);
}

TEST(MrgcnTest, NeighborSumsAreAveragedPerKind) {
  EncoderConfig cfg{.dim = 1, .layers = 1, .positions = 4, .role_embed = false};
  ParameterSet ps;
  add_encoder_parameters(ps, cfg);
  ps.get("enc.l0.attr_obj")[0] = 1.0;
  AbstractSceneGraph g;
  const int o = g.add_object(0);
  g.add_attribute(o);
  g.add_attribute(o);
  Tape tape;
  ParamBinder bind(tape, ps, false);
  const auto y = mrgcn_layer(bind, asg::build_multirel(g),
                             tape.constant(Tensor::matrix(3, 1, {0, 2, 6})), 0)
                     .value();
  EXPECT_DOUBLE_EQ(y[0], 4.0);
}

class EncodeTest : public ::testing::Test {
 protected:
  void build(EncoderConfig cfg, std::uint64_t seed) {
    cfg_ = cfg;
    add_encoder_parameters(ps_, cfg_);
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < ps_.size(); ++i) fill(ps_.at(i), rng);
  }
  Tensor fuse(const Tensor& mean, const Tensor& global) const {
    const std::size_t d = cfg_.dim;
    const Tensor& wf = ps_.get("enc.fuse");
    Tensor out({d});
    for (std::size_t c = 0; c < d; ++c) {
      double acc = 0.0;
      for (std::size_t k = 0; k < d; ++k) acc += mean[k] * wf.at(k, c) + global[k] * wf.at(d + k, c);
      out[c] = std::max(0.0, acc);
    }
    return out;
  }
  EncoderConfig cfg_;
  ParameterSet ps_;
};

TEST_F(EncodeTest, ZeroLayersReturnRoleEmbeddingWithStartRow) {
  build({.dim = 4, .layers = 0, .positions = 4, .role_embed = true}, 5);
  const auto g = sample_graph();
  std::mt19937_64 rng(6);
  const auto feats = random_features(g.size(), 4, rng);
  Tape tape;
  ParamBinder bind(tape, ps_, false);
  const auto enc = encode(bind, g, feats, cfg_);
  const auto x0 = role_embed(bind, g, tape.constant(feats.nodes), cfg_).value();
  const auto& nodes = enc.nodes.value();
  ASSERT_EQ(nodes.shape(), (num::Shape{g.size() + 1, 4}));
  for (std::size_t c = 0; c < 4; ++c) EXPECT_EQ(nodes.at(0, c), ps_.get("enc.start")[c]);
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t c = 0; c < 4; ++c) EXPECT_EQ(nodes.at(i + 1, c), x0.at(i, c));
  }
  Tensor mean({4});
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t c = 0; c < 4; ++c) mean[c] += x0.at(i, c) / static_cast<double>(g.size());
  }
  const Tensor expect = fuse(mean, feats.global);
  for (std::size_t c = 0; c < 4; ++c) EXPECT_NEAR(enc.global[c], expect[c], 1e-14);
}

TEST_F(EncodeTest, SingleNodeMeanIsThatNode) {
  build({.dim = 3, .layers = 2, .positions = 4, .role_embed = true}, 7);
  AbstractSceneGraph g;
  g.add_object(0);
  std::mt19937_64 rng(8);
  const auto feats = random_features(1, 3, rng);
  Tape tape;
  ParamBinder bind(tape, ps_, false);
  const auto enc = encode(bind, g, feats, cfg_);
  Tensor row({3});
  for (std::size_t c = 0; c < 3; ++c) row[c] = enc.nodes.value().at(1, c);
  const Tensor expect = fuse(row, feats.global);
  for (std::size_t c = 0; c < 3; ++c) EXPECT_NEAR(enc.global[c], expect[c], 1e-14);
}

TEST_F(EncodeTest, RejectsEmptyGraphAndMisalignedFeatures) {
  build({.dim = 3, .layers = 1, .positions = 4, .role_embed = true}, 9);
  Tape tape;
  ParamBinder bind(tape, ps_, false);
  EXPECT_THROW(encode(bind, AbstractSceneGraph{}, {Tensor({1, 3}), Tensor({3})}, cfg_),
               ContractError);
  AbstractSceneGraph g;
  g.add_object(0);
  EXPECT_THROW(encode(bind, g, {Tensor({2, 3}), Tensor({3})}, cfg_), ContractError);
}

TEST_F(EncodeTest, PermutationEquivariance) {
  build({.dim = 5, .layers = 2, .positions = 4, .role_embed = true}, 11);
  std::mt19937_64 rng(12);
  const auto g = sample_graph();
  const std::size_t n = g.size();
  for (int trial = 0; trial < 10; ++trial) {
    const auto feats = random_features(n, 5, rng);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<asg::Node> nodes(n);
    for (const auto& nd : g.nodes()) nodes[perm[nd.id]] = {perm[nd.id], nd.role, nd.region};
    std::vector<asg::Edge> edges;
    for (const auto& [s, d] : g.edges()) edges.push_back({perm[s], perm[d]});
    const AbstractSceneGraph h(nodes, edges);
    FeatureBundle hf{Tensor({n, 5}), feats.global};
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t c = 0; c < 5; ++c) hf.nodes.at(perm[i], c) = feats.nodes.at(i, c);
    }
    Tape tape;
    ParamBinder bind(tape, ps_, false);
    const auto eg = encode(bind, g, feats, cfg_);
    const auto eh = encode(bind, h, hf, cfg_);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t c = 0; c < 5; ++c) {
        EXPECT_NEAR(eg.nodes.value().at(i + 1, c), eh.nodes.value().at(perm[i] + 1, c), 1e-12);
      }
    }
    for (std::size_t c = 0; c < 5; ++c) EXPECT_NEAR(eg.global[c], eh.global[c], 1e-12);
  }
}

// Two objects, each with one attribute, identical features: the mirrored
// nodes get the same embeddings.
TEST_F(EncodeTest, IsomorphicNodesMatch) {
  build({.dim = 4, .layers = 2, .positions = 4, .role_embed = true}, 13);
  AbstractSceneGraph g;
  const int a = g.add_object(0);
  const int a_attr = g.add_attribute(a);
  const int b = g.add_object(0);
  const int b_attr = g.add_attribute(b);
  std::mt19937_64 rng(14);
  auto feats = random_features(4, 4, rng);
  for (std::size_t c = 0; c < 4; ++c) {
    feats.nodes.at(b, c) = feats.nodes.at(a, c);
    feats.nodes.at(a_attr, c) = feats.nodes.at(b_attr, c) = feats.nodes.at(a, c);
  }
  Tape tape;
  ParamBinder bind(tape, ps_, false);
  const auto x = encode(bind, g, feats, cfg_).nodes.value();
  for (std::size_t c = 0; c < 4; ++c) {
    EXPECT_DOUBLE_EQ(x.at(a + 1, c), x.at(b + 1, c));
    EXPECT_DOUBLE_EQ(x.at(a_attr + 1, c), x.at(b_attr + 1, c));
  }
}

TEST_F(EncodeTest, GradientsPassGradCheck) {
  build({.dim = 4, .layers = 2, .positions = 4, .role_embed = true}, 15);
  const auto g = sample_graph();
  std::mt19937_64 rng(16);
  const auto feats = random_features(g.size(), 4, rng);
  const Tensor probe = random_matrix(g.size() + 1, 4, rng);
  Tensor probe_global({4});
  fill(probe_global, rng, 1.0);
  auto loss = [&](Tape& tape) {
    ParamBinder bind(tape, ps_, true);
    const auto enc = encode(bind, g, feats, cfg_);
    return num::add(num::sum(num::mul(enc.nodes, tape.constant(probe))),
                    num::sum(num::mul(enc.global, tape.constant(probe_global))));
  };
  const auto res = num::grad_check(loss, ps_.pointers(), 1e-6);
  EXPECT_LT(res.max_relative_error, 1e-4);
  EXPECT_EQ(res.coordinates, ps_.num_scalars());
}

TEST(EncoderConfigTest, ParameterLayout) {
  ParameterSet with, without;
  add_encoder_parameters(with, {.dim = 8, .layers = 2, .positions = 4, .role_embed = true});
  add_encoder_parameters(without, {.dim = 8, .layers = 0, .positions = 4, .role_embed = false});
  EXPECT_EQ(with.size(), 2u + 1u + 2u * 7u + 1u);
  EXPECT_EQ(with.get("enc.fuse").shape(), (num::Shape{16, 8}));
  EXPECT_FALSE(without.contains("enc.role"));
  EXPECT_EQ(without.size(), 2u);
  EncoderConfig bad;
  bad.dim = 0;
  EXPECT_THROW(bad.validate(), ContractError);
}

}  // namespace
}  // namespace asgcap::enc
