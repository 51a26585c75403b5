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

#ifndef ASGCAP_ASG_MULTIREL_H_
#define ASGCAP_ASG_MULTIREL_H_

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

#include "asgcap/asg/graph.h"

namespace asgcap::asg {

enum class RelationKind {
  kObjToAttr,
  kAttrToObj,
  kSubjToRel,
  kRelToSubj,
  kRelToObj,
  kObjToRel,
};

inline constexpr std::size_t kNumRelationKinds = 6;
inline constexpr std::array<RelationKind, kNumRelationKinds> kAllRelationKinds = {
    RelationKind::kObjToAttr, RelationKind::kAttrToObj, RelationKind::kSubjToRel,
    RelationKind::kRelToSubj, RelationKind::kRelToObj,  RelationKind::kObjToRel,
};

std::string_view relation_kind_name(RelationKind kind);
RelationKind inverse(RelationKind kind);

// The ASG with every edge mirrored by a typed inverse. A pair (src, dst)
// under a kind means dst receives a message from src.
struct MultiRelGraph {
  std::size_t num_nodes = 0;
  std::array<std::vector<Edge>, kNumRelationKinds> relations;

  const std::vector<Edge>& edges(RelationKind kind) const {
    return relations[static_cast<std::size_t>(kind)];
  }
  // Sources j with (j, node) under `kind`.
  std::vector<int> neighbors(RelationKind kind, int node) const;
  // Dense num_nodes x num_nodes row-major matrix A with
  // A[i][j] = 1/|N_i| for j in N_i under `kind`.
  std::vector<double> mean_aggregator(RelationKind kind) const;
};

MultiRelGraph build_multirel(const AbstractSceneGraph& g);

}  // namespace asgcap::asg

#endif  // ASGCAP_ASG_MULTIREL_H_
