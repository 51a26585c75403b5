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


#include "asgcap/metrics/report.h"

#include <string>
#include <utility>

#include "asgcap/common/error.h"

namespace asgcap::metrics {
namespace {

template <typename Report, typename F>
void for_each_field(Report& r, F&& f) {
  f("bleu4", r.bleu4);
  f("rouge_l", r.rouge_l);
  f("cider_d", r.cider_d);
  f("G", r.g);
  f("G_o", r.g_o);
  f("G_a", r.g_a);
  f("G_r", r.g_r);
  f("div1", r.div1);
  f("div2", r.div2);
  f("self_cider", r.self_cider);
}

}  // namespace

nlohmann::json MetricReport::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for_each_field(*this, [&](const char* key, const std::optional<double>& v) {
    j[key] = v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  });
  return j;
}

MetricReport MetricReport::from_json(const nlohmann::json& doc) {
  MetricReport r;
  for_each_field(r, [&](const char* key, std::optional<double>& v) {
    if (!doc.contains(key)) throw ContractError(std::string("metric report lacks ") + key);
    if (!doc.at(key).is_null()) v = doc.at(key).get<double>();
  });
  return r;
}

}  // namespace asgcap::metrics
