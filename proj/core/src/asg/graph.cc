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

#include "asgcap/asg/graph.h"

#include <algorithm>
#include <set>
#include <sstream>

#include "asgcap/common/error.h"

namespace asgcap::asg {

std::string_view role_name(NodeRole role) {
  switch (role) {
    case NodeRole::kObject:
      return "object";
    case NodeRole::kAttribute:
      return "attribute";
    case NodeRole::kRelationship:
      return "relationship";
  }
  return "unknown";
}

NodeRole parse_role(std::string_view name) {
  if (name == "object") return NodeRole::kObject;
  if (name == "attribute") return NodeRole::kAttribute;
  if (name == "relationship") return NodeRole::kRelationship;
  throw ContractError("unknown node role '" + std::string(name) + "'");
}

AbstractSceneGraph::AbstractSceneGraph(std::vector<Node> nodes, std::vector<Edge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {}

int AbstractSceneGraph::append(NodeRole role, int region) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back({id, role, region});
  return id;
}

int AbstractSceneGraph::add_object(int region) { return append(NodeRole::kObject, region); }

int AbstractSceneGraph::add_attribute(int object) {
  if (object < 0 || object >= static_cast<int>(size()) || role(object) != NodeRole::kObject) {
    throw ContractError("add_attribute: node " + std::to_string(object) + " is not an object");
  }
  const int id = append(NodeRole::kAttribute, node(object).region);
  edges_.emplace_back(object, id);
  return id;
}

int AbstractSceneGraph::add_relationship(int subject, int object, int region) {
  for (int endpoint : {subject, object}) {
    if (endpoint < 0 || endpoint >= static_cast<int>(size()) ||
        role(endpoint) != NodeRole::kObject) {
      throw ContractError("add_relationship: node " + std::to_string(endpoint) +
                          " is not an object");
    }
  }
  const int id = append(NodeRole::kRelationship, region);
  edges_.emplace_back(subject, id);
  edges_.emplace_back(id, object);
  return id;
}

std::size_t AbstractSceneGraph::count(NodeRole r) const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [r](const Node& n) { return n.role == r; }));
}

std::vector<int> AbstractSceneGraph::attributes_of(int object) const {
  std::vector<int> out;
  for (const auto& [src, dst] : edges_) {
    if (src == object && role(dst) == NodeRole::kAttribute) out.push_back(dst);
  }
  return out;
}

int AbstractSceneGraph::attribute_position(int id) const {
  if (role(id) != NodeRole::kAttribute) return -1;
  const auto attrs = attributes_of(owner_of(id));
  return static_cast<int>(std::find(attrs.begin(), attrs.end(), id) - attrs.begin());
}

int AbstractSceneGraph::owner_of(int attribute) const {
  for (const auto& [src, dst] : edges_) {
    if (dst == attribute) return src;
  }
  throw ContractError("attribute " + std::to_string(attribute) + " has no owner");
}

int AbstractSceneGraph::subject_of(int relationship) const {
  for (const auto& [src, dst] : edges_) {
    if (dst == relationship) return src;
  }
  throw ContractError("relationship " + std::to_string(relationship) + " has no subject");
}

int AbstractSceneGraph::object_of(int relationship) const {
  for (const auto& [src, dst] : edges_) {
    if (src == relationship) return dst;
  }
  throw ContractError("relationship " + std::to_string(relationship) + " has no object");
}

std::vector<int> AbstractSceneGraph::ids_with_role(NodeRole r) const {
  std::vector<int> out;
  for (const Node& n : nodes_) {
    if (n.role == r) out.push_back(n.id);
  }
  return out;
}

std::vector<Violation> validate_asg(const AbstractSceneGraph& g) {
  std::vector<Violation> out;
  const int n = static_cast<int>(g.size());
  const auto& nodes = g.nodes();
  for (int i = 0; i < n; ++i) {
    if (nodes[static_cast<std::size_t>(i)].id != i) {
      out.push_back({i, "node ids must be dense 0..|V|-1; slot " + std::to_string(i) +
                            " holds id " + std::to_string(nodes[static_cast<std::size_t>(i)].id)});
    }
  }
  if (!out.empty()) return out;

  std::vector<int> in_deg(static_cast<std::size_t>(n), 0);
  std::vector<int> out_deg(static_cast<std::size_t>(n), 0);
  std::set<Edge> seen;
  for (const auto& [src, dst] : g.edges()) {
    const std::string edge = "edge (" + std::to_string(src) + "," + std::to_string(dst) + ")";
    if (src < 0 || src >= n || dst < 0 || dst >= n) {
      out.push_back({-1, edge + " references a missing node"});
      continue;
    }
    if (!seen.insert({src, dst}).second) {
      out.push_back({src, edge + " is duplicated"});
      continue;
    }
    ++out_deg[static_cast<std::size_t>(src)];
    ++in_deg[static_cast<std::size_t>(dst)];
    const NodeRole rs = g.role(src);
    const NodeRole rd = g.role(dst);
    const bool allowed = (rs == NodeRole::kObject && rd == NodeRole::kAttribute) ||
                         (rs == NodeRole::kObject && rd == NodeRole::kRelationship) ||
                         (rs == NodeRole::kRelationship && rd == NodeRole::kObject);
    if (!allowed) {
      out.push_back({src, edge + " has pattern " + std::string(role_name(rs)) + "->" +
                              std::string(role_name(rd)) + "; only o->a, o->r, r->o allowed"});
    }
  }

  for (int i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    switch (g.role(i)) {
      case NodeRole::kObject:
        if (nodes[ui].region < 0) out.push_back({i, "object node is not grounded"});
        break;
      case NodeRole::kAttribute:
        if (in_deg[ui] != 1) {
          out.push_back({i, "attribute node needs exactly one incoming edge, has " +
                                std::to_string(in_deg[ui])});
        }
        if (out_deg[ui] != 0) {
          out.push_back({i, "attribute node must have no outgoing edges, has " +
                                std::to_string(out_deg[ui])});
        }
        break;
      case NodeRole::kRelationship:
        if (in_deg[ui] != 1) {
          out.push_back({i, "relationship node needs exactly one incoming edge (subject), has " +
                                std::to_string(in_deg[ui])});
        }
        if (out_deg[ui] != 1) {
          out.push_back({i, "relationship node needs exactly one outgoing edge (object), has " +
                                std::to_string(out_deg[ui])});
        }
        break;
    }
  }
  return out;
}

void require_valid(const AbstractSceneGraph& g, std::string_view context) {
  const auto violations = validate_asg(g);
  if (violations.empty()) return;
  std::ostringstream os;
  os << context << ": invalid ASG";
  for (const Violation& v : violations) {
    os << "\n  ";
    if (v.node >= 0) os << "node " << v.node << ": ";
    os << v.message;
  }
  throw ContractError(os.str());
}

}  // namespace asgcap::asg
