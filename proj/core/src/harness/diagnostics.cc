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


#include "asgcap/harness/diagnostics.h"

#include <chrono>
#include <random>

#include "asgcap/decoder/model.h"
#include "asgcap/synthworld/world.h"

namespace asgcap::harness {

ModelGradCheck model_gradcheck(std::size_t dim, std::uint64_t seed, double eps) {
  synth::WorldConfig wc;
  wc.feature_dim = static_cast<int>(dim);
  const synth::World world(wc);

  synth::Scene scene;
  scene.seed = seed;
  scene.objects.push_back({0, {1, 4}, {0.1, 0.2, 0.3, 0.3}});
  scene.objects.push_back({3, {2}, {0.5, 0.4, 0.2, 0.4}});
  scene.relations.push_back({0, 4, 1});

  asg::AbstractSceneGraph g;
  const int a = g.add_object(0);
  g.add_attribute(a);
  const int b = g.add_object(1);
  g.add_attribute(b);
  g.add_relationship(a, b, 0);
  const auto feats = world.features_for(scene, g);

  dec::ModelConfig mc;
  mc.dim = dim;
  mc.vocab_size = world.vocab().size();
  dec::CaptionModel model(mc, seed);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> word(4, static_cast<int>(mc.vocab_size) - 1);
  std::vector<int> caption(5);
  for (int& w : caption) w = word(rng);  // plus <eos>: 6 target tokens

  const auto t0 = std::chrono::steady_clock::now();
  auto params = model.params().pointers();
  ModelGradCheck out;
  out.result = num::grad_check(
      [&](num::Tape& tape) { return model.loss(tape, g, feats, caption); }, params, eps);
  out.parameters = model.params().num_scalars();
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace asgcap::harness
