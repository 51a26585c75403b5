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

#ifndef ASGCAP_NUMCORE_TAPE_H_
#define ASGCAP_NUMCORE_TAPE_H_

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "asgcap/numcore/tensor.h"

namespace asgcap::num {

class Tape;

// Handle to a value recorded on a Tape. Cheap to copy; valid as long as the
// tape is alive.
class Var {
 public:
  Var() = default;

  const Tensor& value() const;
  const Shape& shape() const { return value().shape(); }
  std::size_t size() const { return value().size(); }
  double item() const { return value().item(); }
  double operator[](std::size_t i) const { return value()[i]; }

  Tape& tape() const { return *tape_; }
  std::size_t id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

struct BackwardArgs {
  std::span<const Tensor* const> inputs;
  const Tensor& output;
  std::span<const double> output_adjoint;
  // Null for inputs that do not need a gradient.
  std::span<std::vector<double>* const> input_adjoints;
};

using ForwardFn = std::function<Tensor(std::span<const Tensor* const>)>;
using BackwardFn = std::function<void(const BackwardArgs&)>;

struct BackwardReport {
  std::size_t nodes_visited = 0;
  // Parameters recorded on the tape that the loss does not depend on. Their
  // gradient buffers are left untouched.
  std::vector<const Tensor*> unreachable_parameters;
};

// Computation record for reverse-mode differentiation.
//
// Nodes are appended in execution order, so the node list is already a
// topological order. Parameters enter as leaves bound to an external Tensor;
// backward() accumulates into that tensor's grad buffer.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Tensor value);
  // One leaf per distinct parameter; repeated calls return the same Var.
  Var parameter(Tensor& param);

  // Appends an op node. The forward function runs immediately; the backward
  // function is kept only when some input needs a gradient.
  Var record(std::string_view op, std::span<const Var> inputs, ForwardFn forward,
             BackwardFn backward);

  BackwardReport backward(Var loss);

  // Re-runs every recorded forward function in order, reading parameters
  // afresh. Control flow taken at record time is not re-evaluated.
  void replay();

  std::size_t size() const { return nodes_.size(); }
  const Tensor& value(std::size_t id) const;
  std::string_view op_name(std::size_t id) const { return nodes_[id].op; }
  std::span<const std::size_t> inputs_of(std::size_t id) const { return nodes_[id].inputs; }
  bool needs_grad(std::size_t id) const { return nodes_[id].needs_grad; }

 private:
  struct Node {
    std::string_view op;
    Tensor value;
    Tensor* param = nullptr;
    std::vector<std::size_t> inputs;
    ForwardFn forward;
    BackwardFn backward;
    bool needs_grad = false;
  };

  std::vector<Node> nodes_;
  std::unordered_map<const Tensor*, std::size_t> param_nodes_;
};

inline const Tensor& Var::value() const { return tape_->value(id_); }

}  // namespace asgcap::num

#endif  // ASGCAP_NUMCORE_TAPE_H_
