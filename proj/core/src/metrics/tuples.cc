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


#include "asgcap/metrics/tuples.h"

#include <cstdlib>

namespace asgcap::metrics {

using synth::WordClass;

TupleCounts counts_of(const asg::AbstractSceneGraph& g) {
  return {static_cast<int>(g.count(asg::NodeRole::kObject)),
          static_cast<int>(g.count(asg::NodeRole::kAttribute)),
          static_cast<int>(g.count(asg::NodeRole::kRelationship))};
}

TupleCounts parse_caption_tuples(const std::vector<std::string>& tokens,
                                 const synth::Vocabulary& vocab) {
  TupleCounts c;
  bool in_mention = false;
  bool fresh = false;          // current mention introduces a new object
  bool have_subject = false;   // a mention completed earlier in this clause
  bool pending_rel = false;
  for (const auto& tok : tokens) {
    const WordClass wc = vocab.word_class(tok);
    if (tok == synth::kWordThe || tok == synth::kWordA) {
      ++c.objects;
      in_mention = true;
      fresh = true;
    } else if (tok == synth::kWordThat) {
      in_mention = true;
      fresh = false;
    } else if (tok == synth::kWordAnd) {
      in_mention = false;
      have_subject = false;
      pending_rel = false;
    } else if (wc == WordClass::kAttribute) {
      if (in_mention && fresh) ++c.attributes;
    } else if (wc == WordClass::kObject) {
      if (!in_mention) ++c.objects;
      in_mention = false;
      if (pending_rel) {
        ++c.relations;
        pending_rel = false;
      }
      have_subject = true;
    } else if (wc == WordClass::kRelation) {
      in_mention = false;
      pending_rel = have_subject;
    }
  }
  return c;
}

GraphStructure graph_structure_metric(const std::vector<std::string>& gen,
                                      const std::vector<std::string>& ref,
                                      const synth::Vocabulary& vocab) {
  const TupleCounts a = parse_caption_tuples(gen, vocab);
  const TupleCounts b = parse_caption_tuples(ref, vocab);
  GraphStructure s;
  s.g_o = std::abs(a.objects - b.objects);
  s.g_a = std::abs(a.attributes - b.attributes);
  s.g_r = std::abs(a.relations - b.relations);
  s.g = (s.g_o + s.g_a + s.g_r) / 3.0;
  return s;
}

GraphStructure mean_graph_structure(const std::vector<GraphStructure>& per_instance) {
  GraphStructure m;
  if (per_instance.empty()) return m;
  for (const auto& s : per_instance) {
    m.g_o += s.g_o;
    m.g_a += s.g_a;
    m.g_r += s.g_r;
  }
  const double n = static_cast<double>(per_instance.size());
  m.g_o /= n;
  m.g_a /= n;
  m.g_r /= n;
  m.g = (m.g_o + m.g_a + m.g_r) / 3.0;
  return m;
}

}  // namespace asgcap::metrics
