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

#ifndef ASGCAP_SYNTHWORLD_VOCAB_H_
#define ASGCAP_SYNTHWORLD_VOCAB_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

namespace asgcap::synth {

enum class WordClass { kSpecial, kFunction, kObject, kAttribute, kRelation };

// Token <-> id mapping for the synthetic caption grammar. Ids 0..3 are the
// specials <pad>, <bos>, <eos>, <unk>; the function words follow, then one
// word per object, attribute and relation class.
class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kBos = 1;
  static constexpr int kEos = 2;
  static constexpr int kUnk = 3;

  Vocabulary() = default;
  Vocabulary(std::vector<std::string> objects, std::vector<std::string> attributes,
             std::vector<std::string> relations);

  std::size_t size() const { return tokens_.size(); }
  const std::string& token(int id) const { return tokens_.at(static_cast<std::size_t>(id)); }
  // kUnk for unknown tokens.
  int id(std::string_view token) const;
  WordClass word_class(std::string_view token) const;

  int object_word(int cls) const { return object_base_ + cls; }
  int attribute_word(int cls) const { return attribute_base_ + cls; }
  int relation_word(int cls) const { return relation_base_ + cls; }

  std::vector<int> encode(const std::vector<std::string>& tokens) const;
  // Stops at <eos>; drops <bos>/<pad>.
  std::vector<std::string> decode(const std::vector<int>& ids) const;

  nlohmann::json to_json() const;
  static Vocabulary from_json(const nlohmann::json& doc);

 private:
  void index();

  std::vector<std::string> tokens_;
  std::vector<WordClass> classes_;
  std::unordered_map<std::string, int> ids_;
  int object_base_ = 0;
  int attribute_base_ = 0;
  int relation_base_ = 0;
};

inline constexpr std::string_view kWordThe = "the";
inline constexpr std::string_view kWordA = "a";
inline constexpr std::string_view kWordThat = "that";
inline constexpr std::string_view kWordThere = "there";
inline constexpr std::string_view kWordIs = "is";
inline constexpr std::string_view kWordAnd = "and";

}  // namespace asgcap::synth

#endif  // ASGCAP_SYNTHWORLD_VOCAB_H_
