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

#include "asgcap/asg/json_io.h"

#include "asgcap/common/error.h"

namespace asgcap::asg {

nlohmann::json to_json(const AbstractSceneGraph& g) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const Node& n : g.nodes()) {
    nodes.push_back({{"id", n.id}, {"role", role_name(n.role)}, {"region", n.region}});
  }
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [src, dst] : g.edges()) edges.push_back({src, dst});
  return {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

AbstractSceneGraph asg_from_json(const nlohmann::json& doc) {
  try {
    std::vector<Node> nodes;
    for (const auto& n : doc.at("nodes")) {
      nodes.push_back({n.at("id").get<int>(), parse_role(n.at("role").get<std::string>()),
                       n.value("region", kNoRegion)});
    }
    std::vector<Edge> edges;
    for (const auto& e : doc.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw ContractError("ASG edge must be [src, dst]");
      edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    return AbstractSceneGraph(std::move(nodes), std::move(edges));
  } catch (const nlohmann::json::exception& ex) {
    throw ContractError(std::string("malformed ASG JSON: ") + ex.what());
  }
}

}  // namespace asgcap::asg
