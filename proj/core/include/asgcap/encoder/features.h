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

#ifndef ASGCAP_ENCODER_FEATURES_H_
#define ASGCAP_ENCODER_FEATURES_H_

#include "asgcap/numcore/tensor.h"

namespace asgcap::enc {

// Visual input for one ASG: a |V| x d matrix of node features aligned with
// node ids, and the d-dimensional global scene vector.
struct FeatureBundle {
  num::Tensor nodes;
  num::Tensor global;
};

}  // namespace asgcap::enc

#endif  // ASGCAP_ENCODER_FEATURES_H_
