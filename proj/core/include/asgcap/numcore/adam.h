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

#ifndef ASGCAP_NUMCORE_ADAM_H_
#define ASGCAP_NUMCORE_ADAM_H_

#include <cstdint>
#include <span>
#include <vector>

#include "asgcap/numcore/tensor.h"

namespace asgcap::num {

struct AdamState {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::int64_t step = 0;
  std::vector<std::vector<double>> first_moment;
  std::vector<std::vector<double>> second_moment;
};

// One bias-corrected Adam update using each parameter's grad buffer. Moment
// buffers are allocated on the first call and must keep matching afterwards.
void adam_step(AdamState& state, std::span<Tensor* const> params);

}  // namespace asgcap::num

#endif  // ASGCAP_NUMCORE_ADAM_H_
