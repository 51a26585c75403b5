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

#include "asgcap/numcore/tape.h"

#include <algorithm>
#include <string>

#include "asgcap/common/error.h"

namespace asgcap::num {

const Tensor& Tape::value(std::size_t id) const {
  const Node& node = nodes_[id];
  return node.param ? *node.param : node.value;
}

Var Tape::constant(Tensor value) {
  Node node;
  node.op = "constant";
  node.value = std::move(value);
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

Var Tape::parameter(Tensor& param) {
  if (auto it = param_nodes_.find(&param); it != param_nodes_.end()) {
    return Var(this, it->second);
  }
  if (!param.all_finite()) throw NumericError("parameter contains non-finite values");
  Node node;
  node.op = "parameter";
  node.param = &param;
  node.needs_grad = param.requires_grad();
  nodes_.push_back(std::move(node));
  param_nodes_.emplace(&param, nodes_.size() - 1);
  return Var(this, nodes_.size() - 1);
}

Var Tape::record(std::string_view op, std::span<const Var> inputs, ForwardFn forward,
                 BackwardFn backward) {
  Node node;
  node.op = op;
  node.inputs.reserve(inputs.size());
  std::vector<const Tensor*> in;
  in.reserve(inputs.size());
  for (const Var& v : inputs) {
    if (v.tape_ != this) throw ContractError(std::string(op) + ": input recorded on another tape");
    node.inputs.push_back(v.id_);
    node.needs_grad = node.needs_grad || nodes_[v.id_].needs_grad;
    in.push_back(&value(v.id_));
  }
  node.value = forward(in);
  if (!node.value.all_finite()) {
    throw NumericError(std::string(op) + ": non-finite output");
  }
  node.forward = std::move(forward);
  if (node.needs_grad) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

BackwardReport Tape::backward(Var loss) {
  if (loss.tape_ != this) throw ContractError("backward: loss recorded on another tape");
  if (value(loss.id_).size() != 1) {
    throw ContractError("backward: loss must be a scalar, got shape " +
                        shape_string(value(loss.id_).shape()));
  }
  BackwardReport report;
  std::vector<std::vector<double>> adjoint(loss.id_ + 1);
  adjoint[loss.id_].assign(1, 1.0);

  std::vector<const Tensor*> in;
  std::vector<std::vector<double>*> din;
  for (std::size_t k = loss.id_ + 1; k-- > 0;) {
    Node& node = nodes_[k];
    if (adjoint[k].empty() || !node.needs_grad) continue;
    ++report.nodes_visited;
    if (node.param) {
      auto grad = node.param->grad();
      if (grad.size() != adjoint[k].size()) {
        throw ContractError("backward: parameter gradient buffer missing");
      }
      for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += adjoint[k][i];
      continue;
    }
    if (!node.backward) continue;
    in.clear();
    din.clear();
    for (std::size_t src : node.inputs) {
      in.push_back(&value(src));
      if (nodes_[src].needs_grad) {
        if (adjoint[src].empty()) adjoint[src].assign(value(src).size(), 0.0);
        din.push_back(&adjoint[src]);
      } else {
        din.push_back(nullptr);
      }
    }
    node.backward(BackwardArgs{in, node.value, adjoint[k], din});
  }

  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    const Node& node = nodes_[k];
    if (node.param && node.needs_grad && (k > loss.id_ || adjoint[k].empty())) {
      report.unreachable_parameters.push_back(node.param);
    }
  }
  return report;
}

void Tape::replay() {
  std::vector<const Tensor*> in;
  for (Node& node : nodes_) {
    if (!node.forward) continue;
    in.clear();
    for (std::size_t src : node.inputs) in.push_back(&value(src));
    node.value = node.forward(in);
    if (!node.value.all_finite()) {
      throw NumericError(std::string(node.op) + ": non-finite output on replay");
    }
  }
}

}  // namespace asgcap::num
