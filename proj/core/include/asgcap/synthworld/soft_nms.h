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


#ifndef ASGCAP_SYNTHWORLD_SOFT_NMS_H_
#define ASGCAP_SYNTHWORLD_SOFT_NMS_H_

#include <cstddef>
#include <vector>

#include "asgcap/synthworld/geometry.h"

namespace asgcap::synth {

struct ScoredBox {
  std::size_t index = 0;  // position in the input
  Box box;
  double score = 0.0;
};

inline constexpr double kSoftNmsSigma = 0.5;
inline constexpr double kSoftNmsFloor = 1e-3;

// Gaussian soft-NMS. Repeatedly selects the highest remaining score and
// multiplies every other remaining score by exp(-iou^2 / sigma). Boxes whose
// score falls below `floor` are dropped. Output is in selection order.
std::vector<ScoredBox> soft_nms(const std::vector<Box>& boxes, const std::vector<double>& scores,
                                double sigma = kSoftNmsSigma, double floor = kSoftNmsFloor);

}  // namespace asgcap::synth

#endif  // ASGCAP_SYNTHWORLD_SOFT_NMS_H_
