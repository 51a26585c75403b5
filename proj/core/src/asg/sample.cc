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

#include "asgcap/asg/sample.h"

namespace asgcap::asg {

AbstractSceneGraph sample_subgraph(const AbstractSceneGraph& full, std::mt19937_64& rng) {
  require_valid(full, "sample_subgraph");
  const auto rels = full.ids_with_role(NodeRole::kRelationship);
  if (rels.empty()) throw NoRelationshipError("sample_subgraph: graph has no relationship nodes");

  std::uniform_int_distribution<std::size_t> pick(0, rels.size() - 1);
  const int rel = rels[pick(rng)];
  const int subj = full.subject_of(rel);
  const int obj = full.object_of(rel);
  std::bernoulli_distribution coin(0.5);

  AbstractSceneGraph sub;
  const int s = sub.add_object(full.node(subj).region);
  const int o = subj == obj ? s : sub.add_object(full.node(obj).region);
  auto maybe_attribute = [&](int source, int target) {
    const auto attrs = full.attributes_of(source);
    // The coin is always drawn so the random stream does not depend on
    // attribute availability.
    const bool take = coin(rng);
    if (take && !attrs.empty()) sub.add_attribute(target);
  };
  maybe_attribute(subj, s);
  if (o != s) maybe_attribute(obj, o);
  sub.add_relationship(s, o, full.node(rel).region);
  return sub;
}

}  // namespace asgcap::asg
