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


#ifndef ASGCAP_NUMCORE_BINDER_H_
#define ASGCAP_NUMCORE_BINDER_H_

#include <string>
#include <string_view>
#include <unordered_map>

#include "asgcap/numcore/parameters.h"
#include "asgcap/numcore/tape.h"

namespace asgcap::num {

// Puts named parameters on a tape, once each. Trainable binding records them
// as gradient leaves; frozen binding records copies as constants, so decoding
// does not keep backward closures around.
class ParamBinder {
 public:
  ParamBinder(Tape& tape, ParameterSet& params, bool trainable)
      : tape_(&tape), params_(&params), trainable_(trainable) {}

  Var operator()(std::string_view name);
  bool has(std::string_view name) const { return params_->contains(name); }
  Tape& tape() const { return *tape_; }
  bool trainable() const { return trainable_; }

 private:
  Tape* tape_;
  ParameterSet* params_;
  bool trainable_;
  std::unordered_map<std::string, Var> bound_;
};

}  // namespace asgcap::num

#endif  // ASGCAP_NUMCORE_BINDER_H_
