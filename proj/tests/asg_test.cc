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
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "asgcap/asg/flow.h"
#include "asgcap/asg/graph.h"
#include "asgcap/asg/json_io.h"
#include "asgcap/asg/multirel.h"
#include "asgcap/asg/sample.h"
#include "asgcap/common/error.h"

namespace asgcap::asg {
namespace {

// o1 -> a1, o1 -> r -> o2, with ids o1=0, a1=1, o2=2, r=3.
AbstractSceneGraph chain_graph() {
  AbstractSceneGraph g;
  const int o1 = g.add_object(0);
  g.add_attribute(o1);
  const int o2 = g.add_object(1);
  g.add_relationship(o1, o2, 0);
  return g;
}

// Random valid ASG; relationships have distinct endpoints.
AbstractSceneGraph random_graph(std::mt19937_64& rng, int max_objects = 3, int max_attrs = 2,
                                int max_rels = 2) {
  AbstractSceneGraph g;
  std::uniform_int_distribution<int> n_obj(1, max_objects);
  const int objects = n_obj(rng);
  std::vector<int> ids;
  for (int i = 0; i < objects; ++i) ids.push_back(g.add_object(i));
  std::uniform_int_distribution<int> n_attr(0, max_attrs);
  for (int o : ids) {
    const int k = n_attr(rng);
    for (int a = 0; a < k; ++a) g.add_attribute(o);
  }
  if (objects >= 2) {
    std::uniform_int_distribution<int> n_rel(0, max_rels);
    std::uniform_int_distribution<int> pick(0, objects - 1);
    const int k = n_rel(rng);
    for (int r = 0; r < k; ++r) {
      const int s = pick(rng);
      int o = pick(rng);
      while (o == s) o = pick(rng);
      g.add_relationship(ids[s], ids[o], r);
    }
  }
  return g;
}

// Independent flow matrix: edges derived straight from the construction
// rules, then M[i][j] = 1 / indeg(i) per edge j -> i.
std::vector<double> oracle_transition(const AbstractSceneGraph& g) {
  const std::size_t n = g.size() + 1;
  std::set<std::pair<std::size_t, std::size_t>> edges;
  std::set<int> rel_targets;
  for (const auto& [s, d] : g.edges()) {
    edges.insert({s + 1u, d + 1u});
    if (g.role(s) == NodeRole::kObject && g.role(d) == NodeRole::kAttribute) {
      edges.insert({d + 1u, s + 1u});
    }
    if (g.role(s) == NodeRole::kRelationship) rel_targets.insert(d);
  }
  const auto objects = g.ids_with_role(NodeRole::kObject);
  bool any = false;
  for (int o : objects) {
    if (!rel_targets.count(o)) {
      edges.insert({0, o + 1u});
      any = true;
    }
  }
  if (!any && !objects.empty()) edges.insert({0, objects.front() + 1u});
  for (std::size_t v = 1; v < n; ++v) {
    bool out = false;
    for (const auto& e : edges) out = out || e.first == v;
    if (!out) edges.insert({v, v});
  }
  std::vector<double> indeg(n, 0.0);
  for (const auto& e : edges) indeg[e.second] += 1.0;
  std::vector<double> m(n * n, 0.0);
  for (const auto& [j, i] : edges) m[i * n + j] = 1.0 / indeg[i];
  return m;
}

// normalize(M^2 alpha), summing over explicit two-step paths j -> m -> i.
std::vector<double> two_step_paths(const FlowGraph& fg, const std::vector<double>& alpha) {
  std::vector<double> out(fg.size, 0.0);
  for (const auto& [j, m] : fg.edges) {
    for (const auto& [m2, i] : fg.edges) {
      if (m2 != m) continue;
      out[i] += fg.m(i, m) * fg.m(m, j) * alpha[j];
    }
  }
  const double total = std::accumulate(out.begin(), out.end(), 0.0);
  if (total < kFlowMassFloor) return alpha;
  for (double& v : out) v /= total;
  return out;
}

std::vector<double> random_distribution(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> a(n);
  for (double& v : a) v = u(rng);
  const double total = std::accumulate(a.begin(), a.end(), 0.0);
  for (double& v : a) v /= total;
  return a;
}

TEST(GraphTest, RoleNamesRoundTrip) {
  for (NodeRole r : {NodeRole::kObject, NodeRole::kAttribute, NodeRole::kRelationship}) {
    EXPECT_EQ(parse_role(role_name(r)), r);
  }
  EXPECT_THROW(parse_role("Object"), ContractError);
}

TEST(GraphTest, BuilderTracksAttributeOrderAndEndpoints) {
  AbstractSceneGraph g;
  const int o = g.add_object(4);
  const int a0 = g.add_attribute(o);
  const int p = g.add_object(2);
  const int a1 = g.add_attribute(o);
  const int r = g.add_relationship(p, o);
  EXPECT_EQ(g.attributes_of(o), (std::vector<int>{a0, a1}));
  EXPECT_EQ(g.attribute_position(a1), 1);
  EXPECT_EQ(g.attribute_position(o), -1);
  EXPECT_EQ(g.node(a1).region, 4);
  EXPECT_EQ(g.owner_of(a1), o);
  EXPECT_EQ(g.subject_of(r), p);
  EXPECT_EQ(g.object_of(r), o);
  EXPECT_EQ(g.node(r).region, kNoRegion);
  EXPECT_EQ(g.count(NodeRole::kObject), 2u);
  EXPECT_THROW(g.add_attribute(a0), ContractError);
  EXPECT_THROW(g.add_relationship(o, r), ContractError);
}

TEST(ValidateTest, SingleObjectIsValid) {
  AbstractSceneGraph g;
  g.add_object(0);
  EXPECT_TRUE(is_valid(g));
}

TEST(ValidateTest, AttributeWithTwoParentsIsRejected) {
  AbstractSceneGraph g({{0, NodeRole::kObject, 0}, {1, NodeRole::kObject, 1},
                        {2, NodeRole::kAttribute, 0}},
                       {{0, 2}, {1, 2}});
  const auto v = validate_asg(g);
  ASSERT_FALSE(v.empty());
  EXPECT_TRUE(std::any_of(v.begin(), v.end(), [](const Violation& x) { return x.node == 2; }));
}

TEST(ValidateTest, RelationshipWithoutObjectIsRejected) {
  AbstractSceneGraph g({{0, NodeRole::kObject, 0}, {1, NodeRole::kRelationship, -1}}, {{0, 1}});
  const auto v = validate_asg(g);
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v.front().node, 1);
  EXPECT_THROW(require_valid(g, "test"), ContractError);
}

TEST(ValidateTest, ForbiddenEdgePatternsAndSparseIds) {
  AbstractSceneGraph aa({{0, NodeRole::kObject, 0}, {1, NodeRole::kObject, 1}}, {{0, 1}});
  EXPECT_FALSE(is_valid(aa));
  AbstractSceneGraph gap({{0, NodeRole::kObject, 0}, {2, NodeRole::kObject, 1}}, {});
  EXPECT_FALSE(is_valid(gap));
  AbstractSceneGraph ungrounded({{0, NodeRole::kObject, kNoRegion}}, {});
  EXPECT_FALSE(is_valid(ungrounded));
  AbstractSceneGraph attr_out({{0, NodeRole::kObject, 0}, {1, NodeRole::kAttribute, 0},
                               {2, NodeRole::kRelationship, -1}},
                              {{0, 1}, {1, 2}, {2, 0}});
  EXPECT_FALSE(is_valid(attr_out));
}

TEST(ValidateTest, RandomBuilderGraphsAreValid) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 200; ++i) EXPECT_TRUE(is_valid(random_graph(rng, 4, 3, 3)));
}

TEST(MultiRelTest, SingleAttributeEdge) {
  AbstractSceneGraph g;
  g.add_attribute(g.add_object(0));
  const auto m = build_multirel(g);
  EXPECT_EQ(m.edges(RelationKind::kObjToAttr), (std::vector<Edge>{{0, 1}}));
  EXPECT_EQ(m.edges(RelationKind::kAttrToObj), (std::vector<Edge>{{1, 0}}));
  for (RelationKind k : {RelationKind::kSubjToRel, RelationKind::kRelToSubj,
                         RelationKind::kRelToObj, RelationKind::kObjToRel}) {
    EXPECT_TRUE(m.edges(k).empty());
  }
}

TEST(MultiRelTest, TripleAndTransposes) {
  AbstractSceneGraph g;
  const int a = g.add_object(0);
  const int b = g.add_object(1);
  const int r = g.add_relationship(a, b);
  const auto m = build_multirel(g);
  EXPECT_EQ(m.edges(RelationKind::kSubjToRel), (std::vector<Edge>{{a, r}}));
  EXPECT_EQ(m.edges(RelationKind::kRelToSubj), (std::vector<Edge>{{r, a}}));
  EXPECT_EQ(m.edges(RelationKind::kRelToObj), (std::vector<Edge>{{r, b}}));
  EXPECT_EQ(m.edges(RelationKind::kObjToRel), (std::vector<Edge>{{b, r}}));
  EXPECT_TRUE(m.edges(RelationKind::kObjToAttr).empty());
}

TEST(MultiRelTest, NoEdgesGivesEmptyRelations) {
  AbstractSceneGraph g;
  g.add_object(0);
  g.add_object(1);
  const auto m = build_multirel(g);
  for (RelationKind k : kAllRelationKinds) EXPECT_TRUE(m.edges(k).empty());
}

TEST(MultiRelTest, RejectsInvalidGraph) {
  AbstractSceneGraph g({{0, NodeRole::kAttribute, 0}}, {});
  EXPECT_THROW(build_multirel(g), ContractError);
}

TEST(MultiRelTest, ForwardUnionIsEdgeSetAndInversesAreTransposes) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = random_graph(rng, 4, 2, 3);
    const auto m = build_multirel(g);
    std::multiset<Edge> forward;
    for (RelationKind k :
         {RelationKind::kObjToAttr, RelationKind::kSubjToRel, RelationKind::kRelToObj}) {
      forward.insert(m.edges(k).begin(), m.edges(k).end());
    }
    EXPECT_EQ(forward, std::multiset<Edge>(g.edges().begin(), g.edges().end()));
    for (RelationKind k : kAllRelationKinds) {
      EXPECT_EQ(inverse(inverse(k)), k);
      std::multiset<Edge> transposed;
      for (const auto& [s, d] : m.edges(inverse(k))) transposed.insert({d, s});
      EXPECT_EQ(transposed, std::multiset<Edge>(m.edges(k).begin(), m.edges(k).end()));
    }
  }
}

TEST(MultiRelTest, MeanAggregatorRowsAverageNeighbors) {
  AbstractSceneGraph g;
  const int o = g.add_object(0);
  g.add_attribute(o);
  g.add_attribute(o);
  const auto m = build_multirel(g);
  const auto a = m.mean_aggregator(RelationKind::kAttrToObj);
  EXPECT_DOUBLE_EQ(a[0 * 3 + 1], 0.5);
  EXPECT_DOUBLE_EQ(a[0 * 3 + 2], 0.5);
  EXPECT_EQ(std::accumulate(a.begin() + 3, a.end(), 0.0), 0.0);
}

TEST(FlowTest, ChainExampleMatrix) {
  const auto fg = build_flow(chain_graph());
  const std::size_t S = 0, o1 = 1, a1 = 2, o2 = 3, r = 4;
  ASSERT_EQ(fg.size, 5u);
  for (auto [s, d] : std::vector<std::pair<std::size_t, std::size_t>>{
           {S, o1}, {o1, a1}, {a1, o1}, {o1, r}, {r, o2}, {o2, o2}}) {
    EXPECT_TRUE(fg.has_edge(s, d)) << s << "->" << d;
  }
  EXPECT_EQ(fg.edges.size(), 6u);
  EXPECT_DOUBLE_EQ(fg.m(o1, S), 0.5);
  EXPECT_DOUBLE_EQ(fg.m(o1, a1), 0.5);
  EXPECT_DOUBLE_EQ(fg.m(a1, o1), 1.0);
  EXPECT_DOUBLE_EQ(fg.m(r, o1), 1.0);
  EXPECT_DOUBLE_EQ(fg.m(o2, r), 0.5);
  EXPECT_DOUBLE_EQ(fg.m(o2, o2), 0.5);
  for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(fg.m(S, j), 0.0);
}

TEST(FlowTest, SingleObjectGetsSelfLoop) {
  AbstractSceneGraph g;
  g.add_object(0);
  const auto fg = build_flow(g);
  EXPECT_DOUBLE_EQ(fg.m(1, 0), 0.5);
  EXPECT_DOUBLE_EQ(fg.m(1, 1), 0.5);
}

TEST(FlowTest, DisconnectedObjectsAreBothSources) {
  AbstractSceneGraph g;
  g.add_object(0);
  g.add_object(1);
  const auto fg = build_flow(g);
  EXPECT_TRUE(fg.has_edge(0, 1));
  EXPECT_TRUE(fg.has_edge(0, 2));
  EXPECT_TRUE(fg.has_edge(1, 1));
  EXPECT_TRUE(fg.has_edge(2, 2));
}

TEST(FlowTest, CycleFallsBackToLowestObject) {
  AbstractSceneGraph g;
  const int a = g.add_object(0);
  const int b = g.add_object(1);
  g.add_relationship(a, b);
  g.add_relationship(b, a);
  const auto fg = build_flow(g);
  EXPECT_TRUE(fg.has_edge(0, FlowGraph::slot(a)));
  EXPECT_FALSE(fg.has_edge(0, FlowGraph::slot(b)));
}

TEST(FlowTest, StepExamples) {
  const auto fg = build_flow(chain_graph());
  const std::vector<double> on_s = {1, 0, 0, 0, 0};
  const auto moved = flow_step(fg, on_s, 1);
  EXPECT_NEAR(moved[1], 1.0, 1e-12);
  const std::vector<double> on_o1 = {0, 1, 0, 0, 0};
  const auto two = flow_step(fg, on_o1, 2);
  EXPECT_NEAR(two[1], 0.5, 1e-12);
  EXPECT_NEAR(two[3], 0.5, 1e-12);
  const std::vector<double> mixed = {0.1, 0.2, 0.3, 0.15, 0.25};
  EXPECT_EQ(flow_step(fg, mixed, 0), mixed);
}

TEST(FlowTest, StepContract) {
  const auto fg = build_flow(chain_graph());
  EXPECT_THROW(flow_step(fg, std::vector<double>{1, 0}, 1), ContractError);
  EXPECT_THROW(flow_step(fg, std::vector<double>{0.5, 0, 0, 0, 0}, 1), ContractError);
  EXPECT_THROW(flow_step(fg, std::vector<double>{1.5, -0.5, 0, 0, 0}, 1), ContractError);
  EXPECT_THROW(flow_step(fg, std::vector<double>{1, 0, 0, 0, 0}, 3), ContractError);
}

TEST(FlowTest, MatrixMatchesIndependentConstruction) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = random_graph(rng, 4, 2, 3);
    const auto fg = build_flow(g);
    const auto expect = oracle_transition(g);
    ASSERT_EQ(fg.transition.size(), expect.size());
    for (std::size_t i = 0; i < expect.size(); ++i) {
      EXPECT_NEAR(fg.transition[i], expect[i], 1e-15) << "trial " << trial << " entry " << i;
    }
    for (std::size_t i = 0; i < fg.size; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < fg.size; ++j) row += fg.m(i, j);
      if (row != 0.0) EXPECT_NEAR(row, 1.0, 1e-12);
    }
  }
}

// Dropping S, self-loops and the reverse a->o edges leaves the ASG itself.
TEST(FlowTest, RecoversOriginalEdges) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = random_graph(rng, 4, 2, 3);
    const auto fg = build_flow(g);
    std::set<Edge> recovered;
    for (const auto& [s, d] : fg.edges) {
      if (s == FlowGraph::kStart || s == d) continue;
      const int src = static_cast<int>(s) - 1, dst = static_cast<int>(d) - 1;
      if (g.role(src) == NodeRole::kAttribute) continue;
      recovered.insert({src, dst});
    }
    EXPECT_EQ(recovered, std::set<Edge>(g.edges().begin(), g.edges().end()));
  }
}

TEST(FlowTest, StepOutputsAreDistributions) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const auto fg = build_flow(random_graph(rng));
    const auto alpha = random_distribution(fg.size, rng);
    for (int k = 0; k < 3; ++k) {
      const auto out = flow_step(fg, alpha, k);
      double total = 0.0;
      for (double v : out) {
        EXPECT_GE(v, 0.0);
        total += v;
      }
      EXPECT_NEAR(total, 1.0, 1e-9);
    }
  }
}

TEST(FlowTest, TwoStepsMatchPathEnumeration) {
  std::mt19937_64 rng(43);
  int checked = 0;
  while (checked < 200) {
    const auto g = random_graph(rng, 3, 1, 2);
    if (g.size() > 6) continue;
    const auto fg = build_flow(g);
    const auto alpha = random_distribution(fg.size, rng);
    const auto got = flow_step(fg, alpha, 2);
    const auto want = two_step_paths(fg, alpha);
    for (std::size_t i = 0; i < fg.size; ++i) EXPECT_NEAR(got[i], want[i], 1e-12);
    ++checked;
  }
}

TEST(FlowTest, FallbackOnVanishingMass) {
  // Valid flow graphs always move some mass, so use a zero matrix.
  FlowGraph fg;
  fg.size = 2;
  fg.transition = {0, 0, 0, 0};
  fg.transition_squared = {0, 0, 0, 0};
  const std::vector<double> alpha = {0.25, 0.75};
  EXPECT_EQ(flow_step(fg, alpha, 1), alpha);
  EXPECT_EQ(flow_step(fg, alpha, 2), alpha);
}

// Relabeling node ids permutes M_f consistently, as long as some object is a
// source so the S attachment does not depend on ids.
TEST(FlowTest, PermutationEquivariance) {
  std::mt19937_64 rng(47);
  int checked = 0;
  while (checked < 100) {
    const auto g = random_graph(rng, 4, 2, 2);
    std::set<int> targets;
    for (const auto& [s, d] : g.edges()) {
      if (g.role(s) == NodeRole::kRelationship) targets.insert(d);
    }
    if (targets.size() == g.count(NodeRole::kObject)) continue;
    std::vector<int> perm(g.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Node> nodes(g.size());
    for (const Node& n : g.nodes()) nodes[perm[n.id]] = {perm[n.id], n.role, n.region};
    std::vector<Edge> edges;
    for (const auto& [s, d] : g.edges()) edges.push_back({perm[s], perm[d]});
    const AbstractSceneGraph h(nodes, edges);
    ASSERT_TRUE(is_valid(h));
    const auto fg = build_flow(g);
    const auto fh = build_flow(h);
    auto slot = [&](std::size_t i) { return i == 0 ? 0 : perm[i - 1] + 1u; };
    for (std::size_t i = 0; i < fg.size; ++i) {
      for (std::size_t j = 0; j < fg.size; ++j) {
        EXPECT_DOUBLE_EQ(fg.m(i, j), fh.m(slot(i), slot(j)));
      }
    }
    ++checked;
  }
}

TEST(SampleTest, SingleTripleIsReturned) {
  AbstractSceneGraph g;
  const int a = g.add_object(3);
  const int b = g.add_object(5);
  g.add_relationship(a, b, 7);
  std::mt19937_64 rng(1);
  const auto sub = sample_subgraph(g, rng);
  EXPECT_EQ(sub.count(NodeRole::kObject), 2u);
  EXPECT_EQ(sub.count(NodeRole::kAttribute), 0u);
  const int r = sub.ids_with_role(NodeRole::kRelationship).at(0);
  EXPECT_EQ(sub.node(r).region, 7);
  EXPECT_EQ(sub.node(sub.subject_of(r)).region, 3);
  EXPECT_EQ(sub.node(sub.object_of(r)).region, 5);
}

TEST(SampleTest, DeterministicForSeed) {
  std::mt19937_64 gen(5);
  const auto g = [&] {
    for (;;) {
      auto c = random_graph(gen, 4, 2, 3);
      if (c.count(NodeRole::kRelationship) > 0) return c;
    }
  }();
  std::mt19937_64 r1(99), r2(99);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(sample_subgraph(g, r1), sample_subgraph(g, r2));
}

TEST(SampleTest, NoRelationshipSignalsFallback) {
  AbstractSceneGraph g;
  g.add_object(0);
  std::mt19937_64 rng(1);
  EXPECT_THROW(sample_subgraph(g, rng), NoRelationshipError);
}

TEST(SampleTest, TriplesAreUniform) {
  AbstractSceneGraph g;
  std::vector<int> objs;
  for (int i = 0; i < 4; ++i) objs.push_back(g.add_object(i));
  g.add_relationship(objs[0], objs[1], 0);
  g.add_relationship(objs[1], objs[2], 1);
  g.add_relationship(objs[2], objs[3], 2);
  std::mt19937_64 rng(2024);
  std::map<int, int> hits;
  const int n = 1000;
  for (int i = 0; i < n; ++i) {
    const auto sub = sample_subgraph(g, rng);
    ++hits[sub.node(sub.ids_with_role(NodeRole::kRelationship).at(0)).region];
  }
  for (int r = 0; r < 3; ++r) EXPECT_NEAR(hits[r] / static_cast<double>(n), 1.0 / 3.0, 0.05);
}

TEST(SampleTest, SamplesAreValidWithAtMostOneAttributePerEndpoint) {
  std::mt19937_64 rng(53);
  int with_attr = 0, total = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto g = random_graph(rng, 4, 2, 3);
    if (g.count(NodeRole::kRelationship) == 0) continue;
    const auto sub = sample_subgraph(g, rng);
    ASSERT_TRUE(is_valid(sub));
    EXPECT_EQ(sub.count(NodeRole::kRelationship), 1u);
    for (int o : sub.ids_with_role(NodeRole::kObject)) {
      EXPECT_LE(sub.attributes_of(o).size(), 1u);
    }
    with_attr += sub.count(NodeRole::kAttribute) > 0;
    ++total;
  }
  EXPECT_GT(with_attr, 0);
  EXPECT_LT(with_attr, total);
}

TEST(JsonTest, RoundTrip) {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = random_graph(rng, 4, 2, 3);
    const auto back = asg_from_json(to_json(g));
    EXPECT_EQ(back, g);
    EXPECT_EQ(back.attributes_of(0), g.attributes_of(0));
  }
}

TEST(JsonTest, LayoutAndErrors) {
  const auto doc = to_json(chain_graph());
  EXPECT_EQ(doc["nodes"][1]["role"], "attribute");
  EXPECT_EQ(doc["edges"][0], nlohmann::json::array({0, 1}));
  EXPECT_THROW(asg_from_json(nlohmann::json::parse(R"({"nodes":[],"edges":[[1]]})")),
               ContractError);
  EXPECT_THROW(asg_from_json(nlohmann::json::parse(R"({"nodes":[{"id":0,"role":"thing"}]})")),
               ContractError);
}

}  // namespace
}  // namespace asgcap::asg
