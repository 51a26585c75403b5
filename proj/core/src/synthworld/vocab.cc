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

#include "asgcap/synthworld/vocab.h"

#include "asgcap/common/error.h"

namespace asgcap::synth {

Vocabulary::Vocabulary(std::vector<std::string> objects, std::vector<std::string> attributes,
                       std::vector<std::string> relations) {
  tokens_ = {"<pad>", "<bos>", "<eos>", "<unk>"};
  classes_.assign(tokens_.size(), WordClass::kSpecial);
  for (std::string_view w : {kWordThe, kWordA, kWordThat, kWordThere, kWordIs, kWordAnd}) {
    tokens_.emplace_back(w);
    classes_.push_back(WordClass::kFunction);
  }
  object_base_ = static_cast<int>(tokens_.size());
  for (auto& w : objects) {
    tokens_.push_back(std::move(w));
    classes_.push_back(WordClass::kObject);
  }
  attribute_base_ = static_cast<int>(tokens_.size());
  for (auto& w : attributes) {
    tokens_.push_back(std::move(w));
    classes_.push_back(WordClass::kAttribute);
  }
  relation_base_ = static_cast<int>(tokens_.size());
  for (auto& w : relations) {
    tokens_.push_back(std::move(w));
    classes_.push_back(WordClass::kRelation);
  }
  index();
}

void Vocabulary::index() {
  ids_.clear();
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!ids_.emplace(tokens_[i], static_cast<int>(i)).second) {
      throw ContractError("duplicate vocabulary token '" + tokens_[i] + "'");
    }
  }
}

int Vocabulary::id(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  return it == ids_.end() ? kUnk : it->second;
}

WordClass Vocabulary::word_class(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  return it == ids_.end() ? WordClass::kSpecial : classes_[static_cast<std::size_t>(it->second)];
}

std::vector<int> Vocabulary::encode(const std::vector<std::string>& tokens) const {
  std::vector<int> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(id(t));
  return out;
}

std::vector<std::string> Vocabulary::decode(const std::vector<int>& ids) const {
  std::vector<std::string> out;
  for (int i : ids) {
    if (i == kEos) break;
    if (i == kBos || i == kPad) continue;
    out.push_back(token(i));
  }
  return out;
}

nlohmann::json Vocabulary::to_json() const {
  nlohmann::json classes = nlohmann::json::array();
  for (WordClass c : classes_) {
    switch (c) {
      case WordClass::kSpecial:
        classes.push_back("special");
        break;
      case WordClass::kFunction:
        classes.push_back("function");
        break;
      case WordClass::kObject:
        classes.push_back("object");
        break;
      case WordClass::kAttribute:
        classes.push_back("attribute");
        break;
      case WordClass::kRelation:
        classes.push_back("relation");
        break;
    }
  }
  nlohmann::json ids = nlohmann::json::object();
  for (std::size_t i = 0; i < tokens_.size(); ++i) ids[tokens_[i]] = i;
  return {{"tokens", tokens_},
          {"classes", classes},
          {"ids", ids},
          {"specials", {{"PAD", kPad}, {"BOS", kBos}, {"EOS", kEos}, {"UNK", kUnk}}}};
}

Vocabulary Vocabulary::from_json(const nlohmann::json& doc) {
  std::vector<std::string> objects, attributes, relations;
  const auto& tokens = doc.at("tokens");
  const auto& classes = doc.at("classes");
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto c = classes.at(i).get<std::string>();
    if (c == "object") objects.push_back(tokens[i].get<std::string>());
    if (c == "attribute") attributes.push_back(tokens[i].get<std::string>());
    if (c == "relation") relations.push_back(tokens[i].get<std::string>());
  }
  Vocabulary v(std::move(objects), std::move(attributes), std::move(relations));
  if (v.tokens_ != tokens.get<std::vector<std::string>>()) {
    throw ContractError("vocab.json token order does not match the grammar layout");
  }
  return v;
}

}  // namespace asgcap::synth
