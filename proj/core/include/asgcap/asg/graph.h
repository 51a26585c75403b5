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

#ifndef ASGCAP_ASG_GRAPH_H_
#define ASGCAP_ASG_GRAPH_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace asgcap::asg {

enum class NodeRole { kObject, kAttribute, kRelationship };

std::string_view role_name(NodeRole role);
// Accepts the lowercase names produced by role_name().
NodeRole parse_role(std::string_view name);

inline constexpr int kNoRegion = -1;

struct Node {
  int id = 0;
  NodeRole role = NodeRole::kObject;
  // Scene grounding: object index for objects and attributes, relation index
  // (or kNoRegion) for relationships.
  int region = kNoRegion;

  friend bool operator==(const Node&, const Node&) = default;
};

// Directed (src, dst) pair of node ids.
using Edge = std::pair<int, int>;

// Abstract Scene Graph: unlabeled object/attribute/relationship nodes with
// directed edges o->a, o->r, r->o. The order of o->a edges is the order in
// which attributes were attached to their object.
class AbstractSceneGraph {
 public:
  AbstractSceneGraph() = default;
  // Raw construction; use validate_asg() to check the result.
  AbstractSceneGraph(std::vector<Node> nodes, std::vector<Edge> edges);

  int add_object(int region);
  // The attribute inherits the object's region.
  int add_attribute(int object);
  int add_relationship(int subject, int object, int region = kNoRegion);

  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Node& node(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  NodeRole role(int id) const { return node(id).role; }
  std::size_t count(NodeRole role) const;

  // Lookups below assume a valid graph.
  std::vector<int> attributes_of(int object) const;
  // 0-based rank among the owning object's attributes; -1 for other roles.
  int attribute_position(int node) const;
  int owner_of(int attribute) const;
  int subject_of(int relationship) const;
  int object_of(int relationship) const;
  std::vector<int> ids_with_role(NodeRole role) const;

  friend bool operator==(const AbstractSceneGraph&, const AbstractSceneGraph&) = default;

 private:
  int append(NodeRole role, int region);

  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
};

struct Violation {
  int node = -1;  // -1 when the violation is not tied to one node
  std::string message;
};

// All construction-rule violations; empty means valid.
std::vector<Violation> validate_asg(const AbstractSceneGraph& g);
inline bool is_valid(const AbstractSceneGraph& g) { return validate_asg(g).empty(); }
// Throws ContractError describing every violation.
void require_valid(const AbstractSceneGraph& g, std::string_view context);

}  // namespace asgcap::asg

#endif  // ASGCAP_ASG_GRAPH_H_
