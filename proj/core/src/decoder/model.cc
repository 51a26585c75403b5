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


#include "asgcap/decoder/model.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>

#include "asgcap/asg/flow.h"
#include "asgcap/common/error.h"
#include "asgcap/numcore/ops.h"

namespace asgcap::dec {

using num::Tensor;
using num::Var;

enc::EncoderConfig ModelConfig::encoder() const {
  return {dim, layers, positions, role_embed};
}

DecoderConfig ModelConfig::decoder() const {
  return {dim, vocab_size, content_attn, flow_attn, graph_update};
}

void ModelConfig::validate() const {
  encoder().validate();
  decoder().validate();
  if (bos < 0 || static_cast<std::size_t>(bos) >= vocab_size) {
    throw ContractError("model config: bos id outside the vocabulary");
  }
  if (eos >= 0 && static_cast<std::size_t>(eos) >= vocab_size) {
    throw ContractError("model config: eos id outside the vocabulary");
  }
  if (max_len == 0) throw ContractError("model config: max_len must be positive");
}

nlohmann::json ModelConfig::to_json() const {
  return {{"dim", dim},
          {"layers", layers},
          {"positions", positions},
          {"vocab_size", vocab_size},
          {"bos", bos},
          {"eos", eos},
          {"max_len", max_len},
          {"role_embed", role_embed},
          {"mrgcn", layers > 0},
          {"content_attn", content_attn},
          {"flow_attn", flow_attn},
          {"graph_update", graph_update},
          {"beam_search", beam_search}};
}

ModelConfig ModelConfig::from_json(const nlohmann::json& doc) {
  try {
    ModelConfig c;
    c.dim = doc.at("dim").get<std::size_t>();
    c.layers = doc.at("layers").get<int>();
    c.positions = doc.at("positions").get<std::size_t>();
    c.vocab_size = doc.at("vocab_size").get<std::size_t>();
    c.bos = doc.at("bos").get<int>();
    c.eos = doc.at("eos").get<int>();
    c.max_len = doc.at("max_len").get<std::size_t>();
    c.role_embed = doc.at("role_embed").get<bool>();
    c.content_attn = doc.at("content_attn").get<bool>();
    c.flow_attn = doc.at("flow_attn").get<bool>();
    c.graph_update = doc.at("graph_update").get<bool>();
    c.beam_search = doc.at("beam_search").get<bool>();
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& ex) {
    throw ContractError(std::string("malformed model config: ") + ex.what());
  }
}

nlohmann::json trace_to_json(const Hypothesis& h, const std::vector<std::string>& words) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : h.trace) {
    nlohmann::json j;
    j["token"] = s.token >= 0 && static_cast<std::size_t>(s.token) < words.size()
                     ? nlohmann::json(words[static_cast<std::size_t>(s.token)])
                     : nlohmann::json(s.token);
    j["alpha"] = s.alpha;
    j["beta"] = s.beta ? nlohmann::json(*s.beta) : nlohmann::json(nullptr);
    j["s"] = s.flow_mode ? nlohmann::json(*s.flow_mode) : nlohmann::json(nullptr);
    j["sentinel"] = s.sentinel ? nlohmann::json(*s.sentinel) : nlohmann::json(nullptr);
    steps.push_back(std::move(j));
  }
  return steps;
}

namespace {

num::ParameterSet make_parameters(const ModelConfig& cfg) {
  num::ParameterSet p;
  enc::add_encoder_parameters(p, cfg.encoder());
  add_decoder_parameters(p, cfg.decoder());
  return p;
}

// Everything one forward pass over a single ASG shares.
struct Session {
  Session(const ModelConfig& cfg, num::ParameterSet& params, bool trainable,
          const asg::AbstractSceneGraph& g, const enc::FeatureBundle& feats)
      : bind(tape, params, trainable) {
    enc::Encoded e = enc::encode(bind, g, feats, cfg.encoder());
    global = e.global;
    flow = flow_constants(tape, asg::build_flow(g));
    start = init_state(tape, e.nodes);
  }

  Var word(int id) { return num::embedding(bind("dec.embed"), static_cast<std::size_t>(id)); }

  num::Tape tape;
  num::ParamBinder bind;
  Var global;
  FlowConstants flow;
  DecoderState start;
};

std::vector<double> log_softmax(const Tensor& logits) {
  const auto v = logits.values();
  const double mx = *std::max_element(v.begin(), v.end());
  double total = 0.0;
  for (double x : v) total += std::exp(x - mx);
  const double lse = mx + std::log(total);
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] - lse;
  return out;
}

StepTrace make_trace(const StepOutput& out, int token) {
  StepTrace t;
  t.token = token;
  const auto a = out.next.alpha.value().values();
  t.alpha.assign(a.begin(), a.end());
  if (out.beta.valid()) t.beta = out.beta.item();
  if (out.flow_mode.valid()) t.flow_mode = {out.flow_mode[0], out.flow_mode[1], out.flow_mode[2]};
  if (out.sentinel.valid()) t.sentinel = out.sentinel.item();
  return t;
}

}  // namespace

CaptionModel::CaptionModel(ModelConfig cfg, std::uint64_t seed)
    : cfg_(std::move(cfg)), params_(make_parameters(cfg_)) {
  cfg_.validate();
  std::mt19937_64 rng(seed);
  params_.init_uniform(rng, 0.1);
  set_forget_bias(params_, cfg_.decoder(), 1.0);
}

CaptionModel::CaptionModel(ModelConfig cfg, num::ParameterSet params)
    : cfg_(std::move(cfg)), params_(std::move(params)) {
  cfg_.validate();
  const num::ParameterSet expected = make_parameters(cfg_);
  if (expected.size() != params_.size()) {
    throw ContractError("caption model: expected " + std::to_string(expected.size()) +
                        " parameters, got " + std::to_string(params_.size()));
  }
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (expected.name(i) != params_.name(i) || expected.at(i).shape() != params_.at(i).shape()) {
      throw ContractError("caption model: parameter " + std::to_string(i) + " is " +
                          params_.name(i) + " " + num::shape_string(params_.at(i).shape()) +
                          ", expected " + expected.name(i) + " " +
                          num::shape_string(expected.at(i).shape()));
    }
  }
}

Var CaptionModel::loss(num::Tape& tape, const asg::AbstractSceneGraph& g,
                       const enc::FeatureBundle& feats, const std::vector<int>& caption) {
  num::ParamBinder bind(tape, params_, true);
  enc::Encoded e = enc::encode(bind, g, feats, cfg_.encoder());
  const FlowConstants fc = flow_constants(tape, asg::build_flow(g));
  DecoderState state = init_state(tape, e.nodes);
  std::vector<int> targets = caption;
  if (cfg_.eos >= 0) targets.push_back(cfg_.eos);
  if (targets.empty()) throw ContractError("loss: empty target sequence");
  const DecoderConfig dcfg = cfg_.decoder();
  std::vector<Var> terms;
  int prev = cfg_.bos;
  for (int y : targets) {
    if (y < 0 || static_cast<std::size_t>(y) >= cfg_.vocab_size) {
      throw ContractError("loss: token id " + std::to_string(y) + " outside the vocabulary");
    }
    Var word = num::embedding(bind("dec.embed"), static_cast<std::size_t>(prev));
    StepOutput out = step(bind, dcfg, fc, state, e.global, word);
    terms.push_back(num::cross_entropy(out.logits, static_cast<std::size_t>(y)));
    state = out.next;
    prev = y;
  }
  return num::sum(num::concat(terms));
}

std::vector<Hypothesis> CaptionModel::beam_search(const asg::AbstractSceneGraph& g,
                                                  const enc::FeatureBundle& feats,
                                                  std::size_t beam, std::size_t max_len) {
  if (beam < 1) throw ContractError("beam_search: beam must be at least 1");
  if (max_len < 1) throw ContractError("beam_search: max_len must be at least 1");
  auto session = std::make_unique<Session>(cfg_, params_, false, g, feats);
  const DecoderConfig dcfg = cfg_.decoder();

  struct Live {
    DecoderState state;
    Hypothesis hyp;
    int last = 0;
  };
  struct Candidate {
    double score;
    std::size_t src;
    int word;
  };
  std::vector<Live> active{{session->start, {}, cfg_.bos}};
  std::vector<Hypothesis> done;
  for (std::size_t t = 0; t < max_len && !active.empty(); ++t) {
    std::vector<StepOutput> outs;
    std::vector<Candidate> cands;
    for (std::size_t h = 0; h < active.size(); ++h) {
      outs.push_back(step(session->bind, dcfg, session->flow, active[h].state, session->global,
                          session->word(active[h].last)));
      const auto lp = log_softmax(outs.back().logits.value());
      for (std::size_t w = 0; w < lp.size(); ++w) {
        cands.push_back({active[h].hyp.log_prob + lp[w], h, static_cast<int>(w)});
      }
    }
    const std::size_t keep = std::min(beam, cands.size());
    std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(keep), cands.end(),
                      [](const Candidate& a, const Candidate& b) {
                        if (a.score != b.score) return a.score > b.score;
                        if (a.src != b.src) return a.src < b.src;
                        return a.word < b.word;
                      });
    std::vector<Live> next;
    for (std::size_t c = 0; c < keep; ++c) {
      const Candidate& cand = cands[c];
      Hypothesis hyp = active[cand.src].hyp;
      hyp.log_prob = cand.score;
      hyp.trace.push_back(make_trace(outs[cand.src], cand.word));
      if (cand.word == cfg_.eos) {
        hyp.finished = true;
        done.push_back(std::move(hyp));
      } else {
        hyp.tokens.push_back(cand.word);
        next.push_back({outs[cand.src].next, std::move(hyp), cand.word});
      }
    }
    active = std::move(next);
    if (done.size() >= beam) break;
  }
  if (done.size() < beam) {
    for (auto& live : active) done.push_back(std::move(live.hyp));
  }
  std::stable_sort(done.begin(), done.end(),
                   [](const Hypothesis& a, const Hypothesis& b) { return a.log_prob > b.log_prob; });
  if (done.size() > beam) done.resize(beam);
  return done;
}

Hypothesis CaptionModel::greedy(const asg::AbstractSceneGraph& g, const enc::FeatureBundle& feats,
                                std::size_t max_len) {
  if (max_len < 1) throw ContractError("greedy: max_len must be at least 1");
  auto session = std::make_unique<Session>(cfg_, params_, false, g, feats);
  const DecoderConfig dcfg = cfg_.decoder();
  Hypothesis hyp;
  DecoderState state = session->start;
  int last = cfg_.bos;
  for (std::size_t t = 0; t < max_len; ++t) {
    StepOutput out = step(session->bind, dcfg, session->flow, state, session->global,
                          session->word(last));
    const auto lp = log_softmax(out.logits.value());
    const auto best = static_cast<int>(std::max_element(lp.begin(), lp.end()) - lp.begin());
    hyp.log_prob += lp[static_cast<std::size_t>(best)];
    hyp.trace.push_back(make_trace(out, best));
    if (best == cfg_.eos) {
      hyp.finished = true;
      break;
    }
    hyp.tokens.push_back(best);
    state = out.next;
    last = best;
  }
  return hyp;
}

Hypothesis CaptionModel::caption(const asg::AbstractSceneGraph& g, const enc::FeatureBundle& feats,
                                 std::size_t beam) {
  if (!cfg_.beam_search || beam == 1) return greedy(g, feats, cfg_.max_len);
  return beam_search(g, feats, beam, cfg_.max_len).front();
}

}  // namespace asgcap::dec
