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

#ifndef ASGCAP_NUMCORE_GRADCHECK_H_
#define ASGCAP_NUMCORE_GRADCHECK_H_

#include <cstddef>
#include <functional>
#include <span>

#include "asgcap/numcore/tape.h"

namespace asgcap::num {

struct GradCheckResult {
  double max_relative_error = 0.0;
  const Tensor* worst_parameter = nullptr;
  std::size_t worst_index = 0;
  std::size_t coordinates = 0;
};

using LossFn = std::function<Var(Tape&)>;

// Compares reverse-mode gradients of `f` with central differences.
//
// The per-coordinate error is |analytic - fd| / max(1, |analytic|, |fd|).
// `f` must be deterministic and differentiable at the evaluation point
// (e.g. not |x| at 0); eps must lie in (0, 1e-3]. Parameter grad buffers are
// overwritten.
GradCheckResult grad_check(const LossFn& f, std::span<Tensor* const> params, double eps);

}  // namespace asgcap::num

#endif  // ASGCAP_NUMCORE_GRADCHECK_H_
