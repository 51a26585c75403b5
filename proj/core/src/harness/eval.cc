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


#include "asgcap/harness/eval.h"

#include <algorithm>
#include <array>
#include <optional>
#include <random>

#include "asgcap/asg/sample.h"
#include "asgcap/common/error.h"
#include "asgcap/metrics/diversity.h"
#include "asgcap/metrics/ngram.h"

namespace asgcap::harness {
namespace {

using Caption = std::vector<std::string>;

nlohmann::json counts_json(const metrics::TupleCounts& c) {
  return {c.objects, c.attributes, c.relations};
}

double opt_div(const std::vector<Caption>& set, std::size_t n) {
  std::size_t words = 0;
  for (const auto& c : set) words += c.size();
  return words == 0 ? 0.0 : metrics::div_n(set, n);
}

void set_diversity(metrics::MetricReport& r, const std::vector<Caption>& set,
                   const metrics::CiderD* df_source) {
  r.div1 = opt_div(set, 1);
  r.div2 = opt_div(set, 2);
  if (set.size() >= 2) r.self_cider = metrics::self_cider(set, df_source);
}

ControlReport aggregate(const std::vector<Caption>& gens, const std::vector<Caption>& refs,
                        const std::vector<std::vector<Caption>>& beams,
                        const std::vector<std::size_t>& scene_ids, const synth::Vocabulary& vocab) {
  if (gens.empty()) throw ContractError("evaluation: no instances");
  ControlReport rep;
  const metrics::CiderD cider(refs);
  std::vector<metrics::GraphStructure> structures;
  double div1 = 0.0;
  double div2 = 0.0;
  double sc = 0.0;
  std::size_t sc_count = 0;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    ControlInstance inst;
    inst.scene_id = scene_ids[i];
    inst.generated = gens[i];
    inst.reference = refs[i];
    inst.generated_counts = metrics::parse_caption_tuples(gens[i], vocab);
    inst.reference_counts = metrics::parse_caption_tuples(refs[i], vocab);
    inst.structure = metrics::graph_structure_metric(gens[i], refs[i], vocab);
    inst.div1 = opt_div(beams[i], 1);
    inst.div2 = opt_div(beams[i], 2);
    if (beams[i].size() >= 2) inst.self_cider = metrics::self_cider(beams[i], &cider);
    structures.push_back(inst.structure);
    div1 += inst.div1;
    div2 += inst.div2;
    if (inst.self_cider) {
      sc += *inst.self_cider;
      ++sc_count;
    }
    rep.exact_objects += inst.generated_counts.objects == inst.reference_counts.objects;
    rep.exact_attributes += inst.generated_counts.attributes == inst.reference_counts.attributes;
    rep.exact_relations += inst.generated_counts.relations == inst.reference_counts.relations;
    rep.instances.push_back(std::move(inst));
  }
  const double n = static_cast<double>(gens.size());
  rep.exact_objects /= n;
  rep.exact_attributes /= n;
  rep.exact_relations /= n;
  const auto gs = metrics::mean_graph_structure(structures);
  auto& s = rep.summary;
  s.bleu4 = metrics::bleu4(gens, refs);
  s.rouge_l = metrics::mean_rouge_l(gens, refs);
  s.cider_d = cider.corpus_score(gens, refs);
  s.g = gs.g;
  s.g_o = gs.g_o;
  s.g_a = gs.g_a;
  s.g_r = gs.g_r;
  s.div1 = div1 / n;
  s.div2 = div2 / n;
  if (sc_count > 0) s.self_cider = sc / static_cast<double>(sc_count);
  return rep;
}

Caption words(const synth::Vocabulary& vocab, const dec::Hypothesis& h) {
  return vocab.decode(h.tokens);
}

}  // namespace

nlohmann::json ControlReport::to_json() const {
  nlohmann::json inst = nlohmann::json::array();
  for (const auto& i : instances) {
    inst.push_back({{"scene_id", i.scene_id},
                    {"generated", i.generated},
                    {"reference", i.reference},
                    {"generated_counts", counts_json(i.generated_counts)},
                    {"reference_counts", counts_json(i.reference_counts)},
                    {"G", i.structure.g},
                    {"G_o", i.structure.g_o},
                    {"G_a", i.structure.g_a},
                    {"G_r", i.structure.g_r},
                    {"div1", i.div1},
                    {"div2", i.div2},
                    {"self_cider", i.self_cider ? nlohmann::json(*i.self_cider) : nlohmann::json(nullptr)}});
  }
  return {{"metrics", summary.to_json()},
          {"exact_count_match",
           {{"objects", exact_objects}, {"attributes", exact_attributes}, {"relations", exact_relations}}},
          {"instances", inst}};
}

ControlReport evaluate_control(dec::CaptionModel& model, const synth::World& world,
                               const Dataset& ds, const std::vector<const TripletRecord*>& records,
                               std::size_t beam) {
  std::vector<Caption> gens, refs;
  std::vector<std::vector<Caption>> beams;
  std::vector<std::size_t> ids;
  const auto& vocab = world.vocab();
  for (const auto* rec : records) {
    const synth::Triplet t = materialize(world, ds, *rec);
    std::vector<Caption> list;
    if (model.config().beam_search && beam > 1) {
      for (const auto& h : model.beam_search(t.asg, t.features, beam, model.config().max_len)) {
        list.push_back(words(vocab, h));
      }
    } else {
      list.push_back(words(vocab, model.greedy(t.asg, t.features, model.config().max_len)));
    }
    gens.push_back(list.front());
    refs.push_back(t.caption);
    beams.push_back(std::move(list));
    ids.push_back(rec->scene_id);
  }
  return aggregate(gens, refs, beams, ids, vocab);
}

ControlReport score_captions(const std::vector<Caption>& generated,
                             const std::vector<Caption>& reference,
                             const synth::Vocabulary& vocab) {
  if (generated.size() != reference.size()) {
    throw ContractError("score_captions: generated and reference differ in size");
  }
  std::vector<std::vector<Caption>> beams;
  std::vector<std::size_t> ids;
  for (std::size_t i = 0; i < generated.size(); ++i) {
    beams.push_back({generated[i]});
    ids.push_back(i);
  }
  return aggregate(generated, reference, beams, ids, vocab);
}

nlohmann::json DiversityReport::to_json() const {
  nlohmann::json per = nlohmann::json::array();
  for (const auto& s : scenes) {
    per.push_back({{"scene_id", s.scene_id},
                   {"distinct_asgs", s.distinct_asgs},
                   {"fallback", s.fell_back},
                   {"captions", s.captions},
                   {"baseline_captions", s.baseline},
                   {"sampled", s.sampled.to_json()},
                   {"repeated", s.repeated.to_json()}});
  }
  return {{"sampled", sampled.to_json()}, {"repeated", repeated.to_json()}, {"scenes", per}};
}

DiversityReport evaluate_diversity(dec::CaptionModel& model, const synth::World& world,
                                   const std::vector<synth::Scene>& scenes,
                                   const synth::RelationClassifier& clf,
                                   const DiversityOptions& opts) {
  if (opts.samples < 1) throw ContractError("evaluate_diversity: samples must be positive");
  if (scenes.empty()) throw ContractError("evaluate_diversity: no scenes");
  const auto& vocab = world.vocab();
  DiversityReport rep;
  std::optional<metrics::CiderD> df_source;
  if (!opts.df_corpus.empty()) df_source.emplace(opts.df_corpus);
  const metrics::CiderD* df = df_source ? &*df_source : nullptr;
  std::array<double, 4> sum_s{}, sum_r{};
  std::size_t sc_s = 0, sc_r = 0;
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    const synth::Scene& scene = scenes[i];
    std::mt19937_64 rng(scene_seed(opts.seed, i));
    const auto proposals = synth::jitter_proposals(scene, rng);
    asg::AbstractSceneGraph full = synth::auto_generate_asg(world, scene, proposals, clf, opts.auto_asg);
    if (full.count(asg::NodeRole::kObject) == 0) full.add_object(0);

    DiversityScene ds;
    ds.scene_id = i;
    std::vector<asg::AbstractSceneGraph> picked;
    const bool has_rel = full.count(asg::NodeRole::kRelationship) > 0;
    ds.fell_back = !has_rel;
    const auto objects = full.ids_with_role(asg::NodeRole::kObject);
    std::bernoulli_distribution coin(0.5);
    for (std::size_t attempt = 0; attempt < 20 * opts.samples && picked.size() < opts.samples;
         ++attempt) {
      asg::AbstractSceneGraph g;
      if (has_rel) {
        g = asg::sample_subgraph(full, rng);
      } else {
        const int o = objects[std::uniform_int_distribution<std::size_t>(0, objects.size() - 1)(rng)];
        const int id = g.add_object(full.node(o).region);
        if (coin(rng) && !full.attributes_of(o).empty()) g.add_attribute(id);
      }
      if (std::find(picked.begin(), picked.end(), g) == picked.end()) picked.push_back(std::move(g));
    }
    ds.distinct_asgs = picked.size();
    for (std::size_t k = 0; picked.size() < opts.samples; ++k) picked.push_back(picked[k]);

    for (const auto& g : picked) {
      const auto feats = world.features_for(scene, g);
      ds.captions.push_back(words(vocab, model.caption(g, feats, opts.beam)));
    }
    const auto base_feats = world.features_for(scene, picked.front());
    for (const auto& h : model.beam_search(picked.front(), base_feats, opts.samples, model.config().max_len)) {
      ds.baseline.push_back(words(vocab, h));
    }
    set_diversity(ds.sampled, ds.captions, df);
    set_diversity(ds.repeated, ds.baseline, df);
    sum_s[0] += *ds.sampled.div1;
    sum_s[1] += *ds.sampled.div2;
    sum_r[0] += *ds.repeated.div1;
    sum_r[1] += *ds.repeated.div2;
    if (ds.sampled.self_cider) {
      sum_s[2] += *ds.sampled.self_cider;
      ++sc_s;
    }
    if (ds.repeated.self_cider) {
      sum_r[2] += *ds.repeated.self_cider;
      ++sc_r;
    }
    rep.scenes.push_back(std::move(ds));
  }
  const double n = static_cast<double>(scenes.size());
  rep.sampled.div1 = sum_s[0] / n;
  rep.sampled.div2 = sum_s[1] / n;
  rep.repeated.div1 = sum_r[0] / n;
  rep.repeated.div2 = sum_r[1] / n;
  if (sc_s > 0) rep.sampled.self_cider = sum_s[2] / static_cast<double>(sc_s);
  if (sc_r > 0) rep.repeated.self_cider = sum_r[2] / static_cast<double>(sc_r);
  return rep;
}

PerturbationResult attribute_perturbation(dec::CaptionModel& model, const synth::World& world,
                                          const Dataset& ds,
                                          const std::vector<const TripletRecord*>& records,
                                          std::size_t max_pairs, std::size_t beam) {
  PerturbationResult r;
  const auto& vocab = world.vocab();
  for (const auto* rec : records) {
    if (r.pairs >= max_pairs) break;
    const synth::Scene& scene = ds.scenes.at(rec->scene_id);
    int target = -1;
    for (int o : rec->asg.ids_with_role(asg::NodeRole::kObject)) {
      const auto& obj = scene.objects.at(static_cast<std::size_t>(rec->asg.node(o).region));
      if (rec->asg.attributes_of(o).size() < obj.attributes.size()) {
        target = o;
        break;
      }
    }
    if (target < 0) continue;
    asg::AbstractSceneGraph more = rec->asg;
    more.add_attribute(target);
    const auto before = model.caption(rec->asg, world.features_for(scene, rec->asg), beam);
    const auto after = model.caption(more, world.features_for(scene, more), beam);
    const int a0 = metrics::parse_caption_tuples(words(vocab, before), vocab).attributes;
    const int a1 = metrics::parse_caption_tuples(words(vocab, after), vocab).attributes;
    ++r.pairs;
    if (a1 > a0) ++r.increased;
  }
  return r;
}

}  // namespace asgcap::harness
