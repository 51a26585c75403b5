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

#include "asgcap/asg/flow.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "asgcap/common/error.h"

namespace asgcap::asg {

bool FlowGraph::has_edge(std::size_t src, std::size_t dst) const {
  return std::binary_search(edges.begin(), edges.end(),
                            Edge{static_cast<int>(src), static_cast<int>(dst)});
}

FlowGraph build_flow(const AbstractSceneGraph& g) {
  require_valid(g, "build_flow");
  FlowGraph fg;
  fg.size = g.size() + 1;
  std::set<Edge> edges;
  auto slot = [](int node) { return static_cast<int>(FlowGraph::slot(node)); };

  for (const auto& [src, dst] : g.edges()) {
    edges.emplace(slot(src), slot(dst));
    if (g.role(dst) == NodeRole::kAttribute) edges.emplace(slot(dst), slot(src));
  }

  // Sources are judged on the ASG's own edges: attribute back-edges and
  // self-loops are flow-graph artifacts.
  std::vector<int> asg_in_degree(g.size(), 0);
  for (const auto& [src, dst] : g.edges()) ++asg_in_degree[static_cast<std::size_t>(dst)];
  const auto objects = g.ids_with_role(NodeRole::kObject);
  bool attached = false;
  for (int o : objects) {
    if (asg_in_degree[static_cast<std::size_t>(o)] == 0) {
      edges.emplace(static_cast<int>(FlowGraph::kStart), slot(o));
      attached = true;
    }
  }
  if (!attached && !objects.empty()) {
    edges.emplace(static_cast<int>(FlowGraph::kStart), slot(objects.front()));
  }

  std::vector<bool> has_out(fg.size, false);
  for (const auto& [src, dst] : edges) has_out[static_cast<std::size_t>(src)] = true;
  for (std::size_t s = 1; s < fg.size; ++s) {
    if (!has_out[s]) edges.emplace(static_cast<int>(s), static_cast<int>(s));
  }

  fg.edges.assign(edges.begin(), edges.end());
  const std::size_t n = fg.size;
  std::vector<int> in_degree(n, 0);
  for (const auto& [src, dst] : fg.edges) ++in_degree[static_cast<std::size_t>(dst)];
  fg.transition.assign(n * n, 0.0);
  for (const auto& [src, dst] : fg.edges) {
    const auto i = static_cast<std::size_t>(dst);
    fg.transition[i * n + static_cast<std::size_t>(src)] = 1.0 / in_degree[i];
  }
  fg.transition_squared.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = 0; p < n; ++p) {
      const double a = fg.transition[i * n + p];
      if (a == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        fg.transition_squared[i * n + j] += a * fg.transition[p * n + j];
      }
    }
  }
  return fg;
}

std::vector<double> flow_step(const FlowGraph& fg, std::span<const double> alpha, int k) {
  if (alpha.size() != fg.size) {
    throw ContractError("flow_step: alpha has " + std::to_string(alpha.size()) +
                        " entries, flow graph has " + std::to_string(fg.size) + " slots");
  }
  double total = 0.0;
  for (double a : alpha) {
    if (!(a >= 0.0) || !std::isfinite(a)) throw ContractError("flow_step: alpha must be nonnegative");
    total += a;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ContractError("flow_step: alpha sums to " + std::to_string(total) + ", expected 1");
  }
  if (k < 0 || k > 2) throw ContractError("flow_step: k must be 0, 1 or 2");

  std::vector<double> out(alpha.begin(), alpha.end());
  if (k == 0) return out;
  const auto& m = k == 1 ? fg.transition : fg.transition_squared;
  const std::size_t n = fg.size;
  double mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += m[i * n + j] * alpha[j];
    out[i] = acc;
    mass += acc;
  }
  if (mass < kFlowMassFloor) return {alpha.begin(), alpha.end()};
  for (double& v : out) v /= mass;
  return out;
}

}  // namespace asgcap::asg
