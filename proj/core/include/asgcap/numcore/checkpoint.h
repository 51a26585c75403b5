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

#ifndef ASGCAP_NUMCORE_CHECKPOINT_H_
#define ASGCAP_NUMCORE_CHECKPOINT_H_

#include <filesystem>

#include "asgcap/numcore/parameters.h"

namespace asgcap::num {

// Writes `manifest.json` (ordered [{name, shape}]) and `weights.bin`
// (row-major little-endian float64 in manifest order) into `dir`.
void save_parameters(const std::filesystem::path& dir, const ParameterSet& params);

// Reads a manifest/weights pair into a fresh set.
ParameterSet load_parameters(const std::filesystem::path& dir);

// Overwrites the values of an existing set. Names and shapes must match the
// manifest exactly, in order.
void load_parameters_into(const std::filesystem::path& dir, ParameterSet& params);

}  // namespace asgcap::num

#endif  // ASGCAP_NUMCORE_CHECKPOINT_H_
