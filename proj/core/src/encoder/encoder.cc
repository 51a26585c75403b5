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


#include "asgcap/encoder/encoder.h"

#include "asgcap/common/error.h"
#include "asgcap/numcore/ops.h"

namespace asgcap::enc {

using asg::NodeRole;
using num::Tensor;
using num::Var;

void EncoderConfig::validate() const {
  if (dim == 0) throw ContractError("encoder: dim must be positive");
  if (layers < 0) throw ContractError("encoder: layers must be nonnegative");
  if (role_embed && positions == 0) throw ContractError("encoder: position table must be nonempty");
}

std::string layer_parameter(int layer, std::string_view which) {
  return "enc.l" + std::to_string(layer) + "." + std::string(which);
}

void add_encoder_parameters(num::ParameterSet& params, const EncoderConfig& cfg) {
  cfg.validate();
  const std::size_t d = cfg.dim;
  if (cfg.role_embed) {
    params.add("enc.role", {3, d});
    params.add("enc.pos", {cfg.positions, d});
  }
  params.add("enc.start", {d});
  for (int l = 0; l < cfg.layers; ++l) {
    params.add(layer_parameter(l, "self"), {d, d});
    for (auto kind : asg::kAllRelationKinds) {
      params.add(layer_parameter(l, asg::relation_kind_name(kind)), {d, d});
    }
  }
  params.add("enc.fuse", {2 * d, d});
}

Var role_embed(num::ParamBinder& bind, const asg::AbstractSceneGraph& g, Var v,
               const EncoderConfig& cfg) {
  const std::size_t n = g.size();
  if (v.shape() != num::Shape{n, cfg.dim}) {
    throw ContractError("role_embed: features are " + num::shape_string(v.shape()) + ", expected " +
                        num::shape_string({n, cfg.dim}));
  }
  Tensor role_sel({n, 3});
  Tensor pos_sel({n, cfg.positions});
  bool any_attribute = false;
  for (const auto& node : g.nodes()) {
    const auto i = static_cast<std::size_t>(node.id);
    role_sel.at(i, static_cast<std::size_t>(node.role)) = 1.0;
    if (node.role == NodeRole::kAttribute) {
      const int order = g.attribute_position(node.id);
      if (order < 0 || static_cast<std::size_t>(order) >= cfg.positions) {
        throw ContractError("role_embed: attribute " + std::to_string(node.id) + " has order " +
                            std::to_string(order) + " but the position table has " +
                            std::to_string(cfg.positions) + " rows");
      }
      pos_sel.at(i, static_cast<std::size_t>(order)) = 1.0;
      any_attribute = true;
    }
  }
  num::Tape& tape = bind.tape();
  Var scale = num::matmul(tape.constant(std::move(role_sel)), bind("enc.role"));
  if (any_attribute) {
    scale = num::add(scale, num::matmul(tape.constant(std::move(pos_sel)), bind("enc.pos")));
  }
  return num::mul(v, scale);
}

Var mrgcn_layer(num::ParamBinder& bind, const asg::MultiRelGraph& mrg, Var x, int layer) {
  const std::size_t n = mrg.num_nodes;
  if (x.shape().size() != 2 || x.shape()[0] != n) {
    throw ContractError("mrgcn_layer: input is " + num::shape_string(x.shape()) + " for " +
                        std::to_string(n) + " nodes");
  }
  Var acc = num::matmul(x, bind(layer_parameter(layer, "self")));
  for (auto kind : asg::kAllRelationKinds) {
    if (mrg.edges(kind).empty()) continue;
    Var agg = bind.tape().constant(Tensor({n, n}, mrg.mean_aggregator(kind)));
    Var msg = num::matmul(num::matmul(agg, x), bind(layer_parameter(layer, asg::relation_kind_name(kind))));
    acc = num::add(acc, msg);
  }
  return num::relu(acc);
}

Encoded encode(num::ParamBinder& bind, const asg::AbstractSceneGraph& g, const FeatureBundle& feats,
               const EncoderConfig& cfg) {
  asg::require_valid(g, "encode");
  if (g.empty()) throw ContractError("encode: the ASG has no nodes");
  const std::size_t n = g.size();
  const std::size_t d = cfg.dim;
  if (feats.nodes.shape() != num::Shape{n, d} || feats.global.shape() != num::Shape{d}) {
    throw ContractError("encode: feature bundle is " + num::shape_string(feats.nodes.shape()) +
                        " + " + num::shape_string(feats.global.shape()) + " for " +
                        std::to_string(n) + " nodes at d=" + std::to_string(d));
  }
  num::Tape& tape = bind.tape();
  Var x = tape.constant(feats.nodes);
  if (cfg.role_embed) x = role_embed(bind, g, x, cfg);
  if (cfg.layers > 0) {
    const auto mrg = asg::build_multirel(g);
    for (int l = 0; l < cfg.layers; ++l) x = mrgcn_layer(bind, mrg, x, l);
  }
  Var graph_mean = num::mean_rows(x);
  Var fused = num::relu(num::matmul(num::concat({graph_mean, tape.constant(feats.global)}), bind("enc.fuse")));
  Var start = num::reshape(bind("enc.start"), {1, d});
  return {num::concat({start, x}), fused};
}

}  // namespace asgcap::enc
