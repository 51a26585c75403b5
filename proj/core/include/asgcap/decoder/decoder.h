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


#ifndef ASGCAP_DECODER_DECODER_H_
#define ASGCAP_DECODER_DECODER_H_

#include <cstddef>
#include <string_view>

#include "asgcap/asg/flow.h"
#include "asgcap/numcore/binder.h"
#include "asgcap/numcore/parameters.h"

namespace asgcap::dec {

struct DecoderConfig {
  std::size_t dim = 64;
  std::size_t vocab_size = 0;
  bool content_attn = true;
  bool flow_attn = true;
  bool graph_update = true;

  void validate() const;
};

// Parameter names, row-vector convention (y = x W):
//   dec.embed            vocab x d
//   dec.att.{wx,wh,b}    attention LSTM, input [v; w; h_lang]
//   dec.lang.{wx,wh,b}   language LSTM, input [z; h_att]
//   dec.out.{w,b}        d x vocab projection
//   dec.ctn.{wx,wh,w}    content attention            (content_attn)
//   dec.flow.{wh,wz,w}   flow mode gate, w is d x 3   (flow_attn)
//   dec.fuse.{wh,wz,w}   fusion gate, w is d x 1      (both attentions)
//   dec.vs.{w,b}         sentinel                     (graph_update)
//   dec.ers.{wh,wx,b}    erase net                    (graph_update)
//   dec.add.{wh,wx,b}    add net                      (graph_update)
// LSTM gates are laid out [input, forget, cell, output].
void add_decoder_parameters(num::ParameterSet& params, const DecoderConfig& cfg);
// Sets every LSTM forget-gate bias to `value`.
void set_forget_bias(num::ParameterSet& params, const DecoderConfig& cfg, double value);

struct LstmState {
  num::Var h;
  num::Var c;
};

LstmState lstm_cell(num::ParamBinder& bind, std::string_view prefix, num::Var input,
                    const LstmState& prev);

// Transposed flow transitions recorded as tape constants, so that a row
// vector alpha times mt1 is one step of flow.
struct FlowConstants {
  std::size_t size = 0;
  num::Var mt1;
  num::Var mt2;
};

FlowConstants flow_constants(num::Tape& tape, const asg::FlowGraph& fg);

// Differentiable flow_step: k in {0,1,2} moves along the flow graph and
// renormalizes, falling back to alpha when the moved mass vanishes.
num::Var flow_move(const FlowConstants& fc, num::Var alpha, int k);

struct DecoderState {
  num::Var x;  // (|V| + 1) x d node memory
  LstmState att;
  LstmState lang;
  num::Var alpha;    // previous attention
  num::Var context;  // previous z
  int t = 1;
};

// Zero recurrent state and context, attention one-hot on the start symbol.
DecoderState init_state(num::Tape& tape, num::Var x_enc);

LstmState attention_query_step(num::ParamBinder& bind, const DecoderState& state,
                               num::Var global, num::Var word);

num::Var content_attention(num::ParamBinder& bind, num::Var x, num::Var h_att);

struct FlowAttention {
  num::Var alpha;
  num::Var mode;  // s_t over (stay, one step, two steps)
};

FlowAttention flow_attention(num::ParamBinder& bind, const FlowConstants& fc, num::Var alpha_prev,
                             num::Var h_att, num::Var z_prev);

struct Fused {
  num::Var alpha;
  num::Var context;
  num::Var beta;
};

Fused fuse_and_context(num::ParamBinder& bind, num::Var alpha_c, num::Var alpha_f, num::Var h_att,
                       num::Var z_prev, num::Var x);

struct LanguageOut {
  LstmState lang;
  num::Var logits;
};

LanguageOut language_step(num::ParamBinder& bind, const LstmState& prev, num::Var z,
                          num::Var h_att);

struct GraphUpdate {
  num::Var x;
  num::Var sentinel;   // scalar gate in (0, 1)
  num::Var intensity;  // u_t = sentinel * alpha
};

GraphUpdate graph_update(num::ParamBinder& bind, num::Var x, num::Var h_lang, num::Var alpha);

// One decoding step. Fields belonging to disabled components stay invalid.
struct StepOutput {
  DecoderState next;
  num::Var logits;
  num::Var alpha_content;
  num::Var alpha_flow;
  num::Var flow_mode;
  num::Var beta;
  num::Var sentinel;
  num::Var intensity;
};

StepOutput step(num::ParamBinder& bind, const DecoderConfig& cfg, const FlowConstants& fc,
                const DecoderState& state, num::Var global, num::Var word);

}  // namespace asgcap::dec

#endif  // ASGCAP_DECODER_DECODER_H_
