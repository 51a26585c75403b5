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

#include "asgcap/numcore/gradcheck.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "asgcap/common/error.h"

namespace asgcap::num {
namespace {

double evaluate(const LossFn& f) {
  Tape tape;
  const double v = f(tape).item();
  if (!std::isfinite(v)) throw NumericError("grad_check: loss is non-finite at a perturbed point");
  return v;
}

}  // namespace

GradCheckResult grad_check(const LossFn& f, std::span<Tensor* const> params, double eps) {
  if (!(eps > 0.0 && eps <= 1e-3)) throw ContractError("grad_check: eps must lie in (0, 1e-3]");

  for (Tensor* p : params) {
    if (!p->requires_grad()) p->set_requires_grad(true);
    p->zero_grad();
  }
  {
    Tape tape;
    Var loss = f(tape);
    tape.backward(loss);
  }

  GradCheckResult result;
  for (Tensor* p : params) {
    const std::vector<double> analytic(p->grad().begin(), p->grad().end());
    for (std::size_t i = 0; i < p->size(); ++i) {
      const double saved = (*p)[i];
      (*p)[i] = saved + eps;
      const double plus = evaluate(f);
      (*p)[i] = saved - eps;
      const double minus = evaluate(f);
      (*p)[i] = saved;
      const double fd = (plus - minus) / (2.0 * eps);
      const double denom = std::max({1.0, std::abs(analytic[i]), std::abs(fd)});
      const double err = std::abs(analytic[i] - fd) / denom;
      ++result.coordinates;
      if (err > result.max_relative_error || result.worst_parameter == nullptr) {
        result.max_relative_error = std::max(err, result.max_relative_error);
        result.worst_parameter = p;
        result.worst_index = i;
      }
    }
  }
  return result;
}

}  // namespace asgcap::num
