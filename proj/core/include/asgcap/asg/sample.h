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

#ifndef ASGCAP_ASG_SAMPLE_H_
#define ASGCAP_ASG_SAMPLE_H_

#include <random>
#include <stdexcept>
#include <string>

#include "asgcap/asg/graph.h"

namespace asgcap::asg {

// Signals that a graph has no subject-relationship-object triple to sample;
// callers fall back to single-object graphs.
class NoRelationshipError : public std::runtime_error {
 public:
  explicit NoRelationshipError(const std::string& what) : std::runtime_error(what) {}
};

// Picks one relationship node uniformly and returns its subject/rel/object
// triple. Each endpoint that owns attribute nodes in `full` keeps its first
// one with probability 1/2. Regions are copied from `full`.
AbstractSceneGraph sample_subgraph(const AbstractSceneGraph& full, std::mt19937_64& rng);

}  // namespace asgcap::asg

#endif  // ASGCAP_ASG_SAMPLE_H_
