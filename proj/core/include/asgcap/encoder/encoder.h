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


#ifndef ASGCAP_ENCODER_ENCODER_H_
#define ASGCAP_ENCODER_ENCODER_H_

#include <cstddef>
#include <string>

#include "asgcap/asg/graph.h"
#include "asgcap/asg/multirel.h"
#include "asgcap/encoder/features.h"
#include "asgcap/numcore/binder.h"
#include "asgcap/numcore/parameters.h"

namespace asgcap::enc {

struct EncoderConfig {
  std::size_t dim = 64;
  int layers = 2;
  // Rows in the attribute position table.
  std::size_t positions = 4;
  // Off: x0 = v.
  bool role_embed = true;

  void validate() const;
};

// Parameter names: enc.role (3 x d), enc.pos (P x d), enc.start (d),
// enc.l<k>.self and enc.l<k>.<relation kind> (d x d), enc.fuse (2d x d).
// Role tables exist only with role embedding on.
void add_encoder_parameters(num::ParameterSet& params, const EncoderConfig& cfg);
std::string layer_parameter(int layer, std::string_view which);

// One row per node: v * W_r[role], plus pos[order] for attributes.
num::Var role_embed(num::ParamBinder& bind, const asg::AbstractSceneGraph& g, num::Var v,
                    const EncoderConfig& cfg);

// relu(x W_self + sum over kinds of mean-aggregated neighbor rows times W_kind).
num::Var mrgcn_layer(num::ParamBinder& bind, const asg::MultiRelGraph& mrg, num::Var x,
                     int layer);

struct Encoded {
  num::Var nodes;   // (|V| + 1) x d, start symbol in row 0
  num::Var global;  // d, relu([mean of graph rows; v_I] W_f)
};

Encoded encode(num::ParamBinder& bind, const asg::AbstractSceneGraph& g, const FeatureBundle& feats,
               const EncoderConfig& cfg);

}  // namespace asgcap::enc

#endif  // ASGCAP_ENCODER_ENCODER_H_
