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


#ifndef ASGCAP_METRICS_REPORT_H_
#define ASGCAP_METRICS_REPORT_H_

#include <optional>

#include <nlohmann/json.hpp>

namespace asgcap::metrics {

struct MetricReport {
  std::optional<double> bleu4;
  std::optional<double> rouge_l;
  std::optional<double> cider_d;
  std::optional<double> g;
  std::optional<double> g_o;
  std::optional<double> g_a;
  std::optional<double> g_r;
  std::optional<double> div1;
  std::optional<double> div2;
  std::optional<double> self_cider;

  // All ten keys are always present; fields that were not computed are null.
  nlohmann::json to_json() const;
  static MetricReport from_json(const nlohmann::json& doc);
};

}  // namespace asgcap::metrics

#endif  // ASGCAP_METRICS_REPORT_H_
