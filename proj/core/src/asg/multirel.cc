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

#include "asgcap/asg/multirel.h"

#include <algorithm>

namespace asgcap::asg {

std::string_view relation_kind_name(RelationKind kind) {
  switch (kind) {
    case RelationKind::kObjToAttr:
      return "obj_attr";
    case RelationKind::kAttrToObj:
      return "attr_obj";
    case RelationKind::kSubjToRel:
      return "subj_rel";
    case RelationKind::kRelToSubj:
      return "rel_subj";
    case RelationKind::kRelToObj:
      return "rel_obj";
    case RelationKind::kObjToRel:
      return "obj_rel";
  }
  return "unknown";
}

RelationKind inverse(RelationKind kind) {
  switch (kind) {
    case RelationKind::kObjToAttr:
      return RelationKind::kAttrToObj;
    case RelationKind::kAttrToObj:
      return RelationKind::kObjToAttr;
    case RelationKind::kSubjToRel:
      return RelationKind::kRelToSubj;
    case RelationKind::kRelToSubj:
      return RelationKind::kSubjToRel;
    case RelationKind::kRelToObj:
      return RelationKind::kObjToRel;
    case RelationKind::kObjToRel:
      return RelationKind::kRelToObj;
  }
  return kind;
}

std::vector<int> MultiRelGraph::neighbors(RelationKind kind, int node) const {
  std::vector<int> out;
  for (const auto& [src, dst] : edges(kind)) {
    if (dst == node) out.push_back(src);
  }
  return out;
}

std::vector<double> MultiRelGraph::mean_aggregator(RelationKind kind) const {
  const std::size_t n = num_nodes;
  std::vector<double> a(n * n, 0.0);
  std::vector<int> degree(n, 0);
  for (const auto& [src, dst] : edges(kind)) ++degree[static_cast<std::size_t>(dst)];
  for (const auto& [src, dst] : edges(kind)) {
    const auto i = static_cast<std::size_t>(dst);
    a[i * n + static_cast<std::size_t>(src)] += 1.0 / degree[i];
  }
  return a;
}

MultiRelGraph build_multirel(const AbstractSceneGraph& g) {
  require_valid(g, "build_multirel");
  MultiRelGraph m;
  m.num_nodes = g.size();
  auto put = [&m](RelationKind kind, int src, int dst) {
    m.relations[static_cast<std::size_t>(kind)].emplace_back(src, dst);
    m.relations[static_cast<std::size_t>(inverse(kind))].emplace_back(dst, src);
  };
  for (const auto& [src, dst] : g.edges()) {
    const NodeRole rs = g.role(src);
    const NodeRole rd = g.role(dst);
    if (rs == NodeRole::kObject && rd == NodeRole::kAttribute) {
      put(RelationKind::kObjToAttr, src, dst);
    } else if (rs == NodeRole::kObject && rd == NodeRole::kRelationship) {
      put(RelationKind::kSubjToRel, src, dst);
    } else {
      put(RelationKind::kRelToObj, src, dst);
    }
  }
  return m;
}

}  // namespace asgcap::asg
