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


#ifndef ASGCAP_HARNESS_DIAGNOSTICS_H_
#define ASGCAP_HARNESS_DIAGNOSTICS_H_

#include <cstddef>
#include <cstdint>

#include "asgcap/numcore/gradcheck.h"

namespace asgcap::harness {

struct ModelGradCheck {
  num::GradCheckResult result;
  std::size_t parameters = 0;
  double seconds = 0.0;
};

// Central-difference check of the full model's teacher-forced loss on a
// 5-node ASG (two attributed objects and one relationship) with a 6-token
// caption.
ModelGradCheck model_gradcheck(std::size_t dim, std::uint64_t seed, double eps = 1e-5);

}  // namespace asgcap::harness

#endif  // ASGCAP_HARNESS_DIAGNOSTICS_H_
