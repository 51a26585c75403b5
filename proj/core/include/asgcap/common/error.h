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

#ifndef ASGCAP_COMMON_ERROR_H_
#define ASGCAP_COMMON_ERROR_H_

#include <stdexcept>
#include <string>

namespace asgcap {

// Raised when a caller breaks an operation's precondition (bad shapes,
// malformed graphs, out-of-range arguments).
class ContractError : public std::logic_error {
 public:
  explicit ContractError(const std::string& what) : std::logic_error(what) {}
};

// Raised when a computation produces NaN/Inf or otherwise diverges.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace asgcap

#endif  // ASGCAP_COMMON_ERROR_H_
