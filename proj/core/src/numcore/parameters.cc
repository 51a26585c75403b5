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

#include "asgcap/numcore/parameters.h"

#include "asgcap/common/error.h"

namespace asgcap::num {

Tensor& ParameterSet::add(std::string name, Shape shape) {
  if (index_.contains(name)) throw ContractError("duplicate parameter '" + name + "'");
  Tensor& t = tensors_.emplace_back(std::move(shape));
  t.set_requires_grad(true);
  index_.emplace(name, names_.size());
  names_.push_back(std::move(name));
  return t;
}

bool ParameterSet::contains(std::string_view name) const {
  return index_.contains(std::string(name));
}

Tensor& ParameterSet::get(std::string_view name) {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) throw ContractError("unknown parameter '" + std::string(name) + "'");
  return tensors_[it->second];
}

const Tensor& ParameterSet::get(std::string_view name) const {
  return const_cast<ParameterSet*>(this)->get(name);
}

std::vector<Tensor*> ParameterSet::pointers() {
  std::vector<Tensor*> out;
  out.reserve(tensors_.size());
  for (Tensor& t : tensors_) out.push_back(&t);
  return out;
}

std::size_t ParameterSet::num_scalars() const {
  std::size_t n = 0;
  for (const Tensor& t : tensors_) n += t.size();
  return n;
}

void ParameterSet::zero_grad() {
  for (Tensor& t : tensors_) t.zero_grad();
}

void ParameterSet::init_uniform(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  for (Tensor& t : tensors_) {
    for (double& v : t.values()) v = dist(rng);
  }
}

}  // namespace asgcap::num
