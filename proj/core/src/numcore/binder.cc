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


#include "asgcap/numcore/binder.h"

namespace asgcap::num {

Var ParamBinder::operator()(std::string_view name) {
  const std::string key(name);
  auto it = bound_.find(key);
  if (it != bound_.end()) return it->second;
  Tensor& t = params_->get(name);
  Var v = trainable_ ? tape_->parameter(t) : tape_->constant(Tensor(t.shape(), std::vector<double>(t.values().begin(), t.values().end())));
  bound_.emplace(key, v);
  return v;
}

}  // namespace asgcap::num
