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


#include "asgcap/decoder/decoder.h"

#include <string>

#include "asgcap/common/error.h"
#include "asgcap/numcore/ops.h"

namespace asgcap::dec {

using num::Tensor;
using num::Var;

namespace {

std::string name(std::string_view prefix, std::string_view leaf) {
  return std::string(prefix) + "." + std::string(leaf);
}

void add_lstm(num::ParameterSet& params, std::string_view prefix, std::size_t in, std::size_t d) {
  params.add(name(prefix, "wx"), {in, 4 * d});
  params.add(name(prefix, "wh"), {d, 4 * d});
  params.add(name(prefix, "b"), {4 * d});
}

}  // namespace

void DecoderConfig::validate() const {
  if (dim == 0) throw ContractError("decoder: dim must be positive");
  if (vocab_size == 0) throw ContractError("decoder: vocabulary is empty");
  if (!content_attn && !flow_attn) {
    throw ContractError("decoder: at least one of content and flow attention must be enabled");
  }
}

void add_decoder_parameters(num::ParameterSet& params, const DecoderConfig& cfg) {
  cfg.validate();
  const std::size_t d = cfg.dim;
  params.add("dec.embed", {cfg.vocab_size, d});
  add_lstm(params, "dec.att", 3 * d, d);
  add_lstm(params, "dec.lang", 2 * d, d);
  params.add("dec.out.w", {d, cfg.vocab_size});
  params.add("dec.out.b", {cfg.vocab_size});
  if (cfg.content_attn) {
    params.add("dec.ctn.wx", {d, d});
    params.add("dec.ctn.wh", {d, d});
    params.add("dec.ctn.w", {d});
  }
  if (cfg.flow_attn) {
    params.add("dec.flow.wh", {d, d});
    params.add("dec.flow.wz", {d, d});
    params.add("dec.flow.w", {d, 3});
  }
  if (cfg.content_attn && cfg.flow_attn) {
    params.add("dec.fuse.wh", {d, d});
    params.add("dec.fuse.wz", {d, d});
    params.add("dec.fuse.w", {d, 1});
  }
  if (cfg.graph_update) {
    params.add("dec.vs.w", {d, 1});
    params.add("dec.vs.b", {1});
    for (const char* net : {"dec.ers", "dec.add"}) {
      params.add(name(net, "wh"), {d, d});
      params.add(name(net, "wx"), {d, d});
      params.add(name(net, "b"), {d});
    }
  }
}

void set_forget_bias(num::ParameterSet& params, const DecoderConfig& cfg, double value) {
  for (const char* cell : {"dec.att.b", "dec.lang.b"}) {
    double* b = params.get(cell).data();
    for (std::size_t i = cfg.dim; i < 2 * cfg.dim; ++i) b[i] = value;
  }
}

LstmState lstm_cell(num::ParamBinder& bind, std::string_view prefix, Var input,
                    const LstmState& prev) {
  const std::size_t d = prev.h.size();
  Var gates = num::add(num::add(num::matmul(input, bind(name(prefix, "wx"))),
                                num::matmul(prev.h, bind(name(prefix, "wh")))),
                       bind(name(prefix, "b")));
  Var i = num::sigmoid(num::slice(gates, 0, d));
  Var f = num::sigmoid(num::slice(gates, d, 2 * d));
  Var g = num::tanh(num::slice(gates, 2 * d, 3 * d));
  Var o = num::sigmoid(num::slice(gates, 3 * d, 4 * d));
  Var c = num::add(num::mul(f, prev.c), num::mul(i, g));
  return {num::mul(o, num::tanh(c)), c};
}

FlowConstants flow_constants(num::Tape& tape, const asg::FlowGraph& fg) {
  const std::size_t n = fg.size;
  Tensor t1({n, n});
  Tensor t2({n, n});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      t1.at(j, i) = fg.transition[i * n + j];
      t2.at(j, i) = fg.transition_squared[i * n + j];
    }
  }
  return {n, tape.constant(std::move(t1)), tape.constant(std::move(t2))};
}

Var flow_move(const FlowConstants& fc, Var alpha, int k) {
  if (alpha.shape() != num::Shape{fc.size}) {
    throw ContractError("flow_move: alpha is " + num::shape_string(alpha.shape()) + " for " +
                        std::to_string(fc.size) + " slots");
  }
  if (k == 0) return alpha;
  if (k != 1 && k != 2) throw ContractError("flow_move: k must be 0, 1 or 2");
  Var moved = num::matmul(alpha, k == 1 ? fc.mt1 : fc.mt2);
  double mass = 0.0;
  for (double v : moved.value().values()) mass += v;
  if (mass < asg::kFlowMassFloor) return alpha;
  return num::normalize(moved);
}

DecoderState init_state(num::Tape& tape, Var x_enc) {
  if (x_enc.shape().size() != 2) throw ContractError("init_state: node memory must be a matrix");
  const std::size_t n = x_enc.shape()[0];
  const std::size_t d = x_enc.shape()[1];
  DecoderState s;
  s.x = x_enc;
  Var zero = tape.constant(Tensor({d}));
  s.att = {zero, zero};
  s.lang = {zero, zero};
  Tensor alpha({n});
  alpha[0] = 1.0;
  s.alpha = tape.constant(std::move(alpha));
  s.context = zero;
  s.t = 1;
  return s;
}

LstmState attention_query_step(num::ParamBinder& bind, const DecoderState& state, Var global,
                               Var word) {
  return lstm_cell(bind, "dec.att", num::concat({global, word, state.lang.h}), state.att);
}

Var content_attention(num::ParamBinder& bind, Var x, Var h_att) {
  Var pre = num::add_row(num::matmul(x, bind("dec.ctn.wx")), num::matmul(h_att, bind("dec.ctn.wh")));
  return num::softmax(num::matmul(num::tanh(pre), bind("dec.ctn.w")));
}

FlowAttention flow_attention(num::ParamBinder& bind, const FlowConstants& fc, Var alpha_prev,
                             Var h_att, Var z_prev) {
  Var hidden = num::relu(num::add(num::matmul(h_att, bind("dec.flow.wh")),
                                  num::matmul(z_prev, bind("dec.flow.wz"))));
  Var mode = num::softmax(num::matmul(hidden, bind("dec.flow.w")));
  Var moves = num::reshape(num::concat({flow_move(fc, alpha_prev, 0), flow_move(fc, alpha_prev, 1),
                                        flow_move(fc, alpha_prev, 2)}),
                           {3, fc.size});
  return {num::matmul(mode, moves), mode};
}

Fused fuse_and_context(num::ParamBinder& bind, Var alpha_c, Var alpha_f, Var h_att, Var z_prev,
                       Var x) {
  Var hidden = num::relu(num::add(num::matmul(h_att, bind("dec.fuse.wh")),
                                  num::matmul(z_prev, bind("dec.fuse.wz"))));
  Var beta = num::sigmoid(num::matmul(hidden, bind("dec.fuse.w")));
  Var alpha = num::add(alpha_f, num::scale(num::sub(alpha_c, alpha_f), beta));
  return {alpha, num::matmul(alpha, x), beta};
}

LanguageOut language_step(num::ParamBinder& bind, const LstmState& prev, Var z, Var h_att) {
  LstmState lang = lstm_cell(bind, "dec.lang", num::concat({z, h_att}), prev);
  Var logits = num::add(num::matmul(lang.h, bind("dec.out.w")), bind("dec.out.b"));
  return {lang, logits};
}

GraphUpdate graph_update(num::ParamBinder& bind, Var x, Var h_lang, Var alpha) {
  Var sentinel = num::sigmoid(num::add(num::matmul(h_lang, bind("dec.vs.w")), bind("dec.vs.b")));
  Var u = num::scale(alpha, sentinel);
  auto net = [&](const char* prefix) {
    Var per_step = num::add(num::matmul(h_lang, bind(name(prefix, "wh"))), bind(name(prefix, "b")));
    return num::add_row(num::matmul(x, bind(name(prefix, "wx"))), per_step);
  };
  Var erase = num::sigmoid(net("dec.ers"));
  Var add = num::relu(net("dec.add"));
  Var kept = num::sub(x, num::mul_rows(num::mul(x, erase), u));
  return {num::add(kept, num::mul_rows(add, u)), sentinel, u};
}

StepOutput step(num::ParamBinder& bind, const DecoderConfig& cfg, const FlowConstants& fc,
                const DecoderState& state, Var global, Var word) {
  StepOutput out;
  LstmState att = attention_query_step(bind, state, global, word);
  Var alpha;
  Var context;
  if (cfg.content_attn) out.alpha_content = content_attention(bind, state.x, att.h);
  if (cfg.flow_attn) {
    FlowAttention fa = flow_attention(bind, fc, state.alpha, att.h, state.context);
    out.alpha_flow = fa.alpha;
    out.flow_mode = fa.mode;
  }
  if (cfg.content_attn && cfg.flow_attn) {
    Fused f = fuse_and_context(bind, out.alpha_content, out.alpha_flow, att.h, state.context, state.x);
    alpha = f.alpha;
    context = f.context;
    out.beta = f.beta;
  } else {
    alpha = cfg.content_attn ? out.alpha_content : out.alpha_flow;
    context = num::matmul(alpha, state.x);
  }
  LanguageOut lang = language_step(bind, state.lang, context, att.h);
  out.logits = lang.logits;

  out.next.att = att;
  out.next.lang = lang.lang;
  out.next.alpha = alpha;
  out.next.context = context;
  out.next.t = state.t + 1;
  if (cfg.graph_update) {
    GraphUpdate gu = graph_update(bind, state.x, lang.lang.h, alpha);
    out.next.x = gu.x;
    out.sentinel = gu.sentinel;
    out.intensity = gu.intensity;
  } else {
    out.next.x = state.x;
  }
  return out;
}

}  // namespace asgcap::dec
