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


#include "asgcap/synthworld/soft_nms.h"

#include <cmath>
#include <string>

#include "asgcap/common/error.h"

namespace asgcap::synth {

std::vector<ScoredBox> soft_nms(const std::vector<Box>& boxes, const std::vector<double>& scores,
                                double sigma, double floor) {
  if (boxes.size() != scores.size()) {
    throw ContractError("soft_nms: " + std::to_string(boxes.size()) + " boxes but " +
                        std::to_string(scores.size()) + " scores");
  }
  if (!(sigma > 0.0)) throw ContractError("soft_nms: sigma must be positive");
  std::vector<ScoredBox> pending;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    if (!(scores[i] >= 0.0 && scores[i] <= 1.0)) {
      throw ContractError("soft_nms: score " + std::to_string(i) + " outside [0,1]");
    }
    if (scores[i] >= floor) pending.push_back({i, boxes[i], scores[i]});
  }

  std::vector<ScoredBox> kept;
  while (!pending.empty()) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < pending.size(); ++i) {
      // Ties go to the earlier input box.
      if (pending[i].score > pending[best].score) best = i;
    }
    kept.push_back(pending[best]);
    pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(best));
    const Box& top = kept.back().box;
    std::vector<ScoredBox> next;
    for (ScoredBox& b : pending) {
      const double o = iou(top, b.box);
      b.score *= std::exp(-(o * o) / sigma);
      if (b.score >= floor) next.push_back(b);
    }
    pending = std::move(next);
  }
  return kept;
}

}  // namespace asgcap::synth
