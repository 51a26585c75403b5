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


#ifndef ASGCAP_METRICS_TUPLES_H_
#define ASGCAP_METRICS_TUPLES_H_

#include <string>
#include <vector>

#include "asgcap/asg/graph.h"
#include "asgcap/synthworld/vocab.h"

namespace asgcap::metrics {

struct TupleCounts {
  int objects = 0;     // (o)
  int attributes = 0;  // (o, a)
  int relations = 0;   // (o, r, o)

  friend bool operator==(const TupleCounts&, const TupleCounts&) = default;
};

TupleCounts counts_of(const asg::AbstractSceneGraph& g);

// Inverts the caption grammar. Every "the"/"a" mention (or bare class word)
// is one object, attribute words inside a fresh mention are (o, a) tuples,
// and a relation word between two completed mentions of one clause is an
// (o, r, o) tuple. "that" mentions refer back and add no object. Never
// throws; unknown tokens are skipped.
TupleCounts parse_caption_tuples(const std::vector<std::string>& tokens,
                                 const synth::Vocabulary& vocab);

struct GraphStructure {
  double g = 0.0;
  double g_o = 0.0;
  double g_a = 0.0;
  double g_r = 0.0;
};

// Per-type absolute count differences and their mean.
GraphStructure graph_structure_metric(const std::vector<std::string>& gen,
                                      const std::vector<std::string>& ref,
                                      const synth::Vocabulary& vocab);
// Per-type means over instances, then the mean of the three.
GraphStructure mean_graph_structure(const std::vector<GraphStructure>& per_instance);

}  // namespace asgcap::metrics

#endif  // ASGCAP_METRICS_TUPLES_H_
