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

#ifndef ASGCAP_ASG_JSON_IO_H_
#define ASGCAP_ASG_JSON_IO_H_

#include <nlohmann/json.hpp>

#include "asgcap/asg/graph.h"

namespace asgcap::asg {

// {"nodes":[{"id":0,"role":"object","region":0},...],"edges":[[0,2],[2,1]]}
nlohmann::json to_json(const AbstractSceneGraph& g);
// Parses the layout above without validating construction rules.
AbstractSceneGraph asg_from_json(const nlohmann::json& doc);

}  // namespace asgcap::asg

#endif  // ASGCAP_ASG_JSON_IO_H_
