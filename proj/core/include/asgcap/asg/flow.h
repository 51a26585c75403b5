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

#ifndef ASGCAP_ASG_FLOW_H_
#define ASGCAP_ASG_FLOW_H_

#include <cstddef>
#include <span>
#include <vector>

#include "asgcap/asg/graph.h"

namespace asgcap::asg {

// Transition structure used by graph flow attention.
//
// Slot 0 is the start symbol S; ASG node i occupies slot i + 1. The matrix
// M_f has M_f[i][j] = 1/indeg(i) when the flow graph has an edge j -> i.
struct FlowGraph {
  static constexpr std::size_t kStart = 0;
  static constexpr std::size_t slot(int node) { return static_cast<std::size_t>(node) + 1; }

  std::size_t size = 0;     // |V| + 1
  std::vector<Edge> edges;  // slot pairs, sorted
  std::vector<double> transition;         // M_f, size x size row-major
  std::vector<double> transition_squared; // M_f^2

  double m(std::size_t i, std::size_t j) const { return transition[i * size + j]; }
  bool has_edge(std::size_t src, std::size_t dst) const;
};

// Builds the flow graph: S points at every object without incoming
// relationship edges (the lowest-id object if none qualifies), o<->a edges
// run both ways, and every non-S slot without an outgoing edge gets a
// self-loop.
FlowGraph build_flow(const AbstractSceneGraph& g);

// Moves an attention distribution k in {0,1,2} steps along M_f and
// renormalizes. Returns alpha unchanged when the moved mass is below 1e-12.
std::vector<double> flow_step(const FlowGraph& fg, std::span<const double> alpha, int k);

// Mass below which flow_step falls back to the input distribution.
inline constexpr double kFlowMassFloor = 1e-12;

}  // namespace asgcap::asg

#endif  // ASGCAP_ASG_FLOW_H_
