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

#include "asgcap/numcore/checkpoint.h"

#include <bit>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "asgcap/common/error.h"

namespace asgcap::num {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::uint64_t to_little_endian(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
    return r;
  }
  return v;
}

struct Entry {
  std::string name;
  Shape shape;
};

std::vector<Entry> read_manifest(const fs::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw ContractError("cannot open " + (dir / "manifest.json").string());
  json doc = json::parse(in);
  std::vector<Entry> entries;
  for (const json& e : doc) {
    entries.push_back({e.at("name").get<std::string>(), e.at("shape").get<Shape>()});
  }
  return entries;
}

std::vector<double> read_weights(const fs::path& dir, std::size_t expected) {
  std::ifstream in(dir / "weights.bin", std::ios::binary);
  if (!in) throw ContractError("cannot open " + (dir / "weights.bin").string());
  std::vector<double> values(expected);
  for (double& v : values) {
    std::uint64_t raw = 0;
    if (!in.read(reinterpret_cast<char*>(&raw), sizeof raw)) {
      throw ContractError("weights.bin is shorter than the manifest requires");
    }
    v = std::bit_cast<double>(to_little_endian(raw));
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw ContractError("weights.bin is longer than the manifest requires");
  }
  return values;
}

}  // namespace

void save_parameters(const fs::path& dir, const ParameterSet& params) {
  fs::create_directories(dir);
  json manifest = json::array();
  for (std::size_t i = 0; i < params.size(); ++i) {
    manifest.push_back({{"name", params.name(i)}, {"shape", params.at(i).shape()}});
  }
  std::ofstream(dir / "manifest.json") << manifest.dump(2) << '\n';

  std::ofstream out(dir / "weights.bin", std::ios::binary);
  for (std::size_t i = 0; i < params.size(); ++i) {
    for (double v : params.at(i).values()) {
      const std::uint64_t raw = to_little_endian(std::bit_cast<std::uint64_t>(v));
      out.write(reinterpret_cast<const char*>(&raw), sizeof raw);
    }
  }
  if (!out) throw ContractError("failed writing " + (dir / "weights.bin").string());
}

ParameterSet load_parameters(const fs::path& dir) {
  const auto entries = read_manifest(dir);
  std::size_t total = 0;
  for (const Entry& e : entries) total += shape_numel(e.shape);
  const auto values = read_weights(dir, total);
  ParameterSet params;
  std::size_t offset = 0;
  for (const Entry& e : entries) {
    Tensor& t = params.add(e.name, e.shape);
    std::copy_n(values.begin() + static_cast<std::ptrdiff_t>(offset), t.size(), t.data());
    offset += t.size();
  }
  return params;
}

void load_parameters_into(const fs::path& dir, ParameterSet& params) {
  const auto entries = read_manifest(dir);
  if (entries.size() != params.size()) {
    throw ContractError("checkpoint has " + std::to_string(entries.size()) +
                        " tensors, model expects " + std::to_string(params.size()));
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].name != params.name(i) || entries[i].shape != params.at(i).shape()) {
      throw ContractError("checkpoint tensor '" + entries[i].name + "' " +
                          shape_string(entries[i].shape) + " does not match model tensor '" +
                          params.name(i) + "' " + shape_string(params.at(i).shape()));
    }
  }
  const auto values = read_weights(dir, params.num_scalars());
  std::size_t offset = 0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    Tensor& t = params.at(i);
    std::copy_n(values.begin() + static_cast<std::ptrdiff_t>(offset), t.size(), t.data());
    offset += t.size();
  }
}

}  // namespace asgcap::num
