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

#include <cmath>
#include <filesystem>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "asgcap/asg/graph.h"
#include "asgcap/common/error.h"
#include "asgcap/harness/dataset.h"
#include "asgcap/harness/diagnostics.h"
#include "asgcap/harness/eval.h"
#include "asgcap/harness/train.h"

namespace asgcap::harness {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("asgcap_harness_" + name);
  fs::remove_all(dir);
  return dir;
}

DatasetConfig small_config(std::size_t train, std::size_t test) {
  DatasetConfig c;
  c.num_train = train;
  c.num_test = test;
  c.seed = 11;
  c.world.feature_dim = 16;
  c.relclf.train_scenes = 40;
  c.relclf.heldout_scenes = 20;
  c.relclf.epochs = 2;
  return c;
}

std::vector<synth::Triplet> triplets(const synth::World& world, const Dataset& ds, Split s) {
  std::vector<synth::Triplet> out;
  for (const auto* rec : ds.split(s)) out.push_back(materialize(world, ds, *rec));
  return out;
}

TrainConfig tiny_train(int epochs) {
  TrainConfig c;
  c.dim = 16;
  c.layers = 1;
  c.batch = 4;
  c.epochs = epochs;
  c.learning_rate = 3e-3;
  c.max_len = 16;
  c.beam = 2;
  return c;
}

std::vector<double> flat(const num::ParameterSet& ps) {
  std::vector<double> out;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const auto v = ps.at(i).values();
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

TEST(Dataset, SceneSeedsAreDeterministicAndDistinct) {
  EXPECT_EQ(scene_seed(1, 5), scene_seed(1, 5));
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(scene_seed(3, i));
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_NE(scene_seed(1, 0), scene_seed(2, 0));
}

TEST(Dataset, GenerationIsDeterministicAndSplit) {
  const auto cfg = small_config(30, 10);
  const synth::World world(cfg.world);
  const Dataset a = generate_dataset(world, cfg);
  const Dataset b = generate_dataset(world, cfg);
  ASSERT_EQ(a.triplets.size(), 40u);
  EXPECT_EQ(a.split(Split::kTrain).size(), 30u);
  EXPECT_EQ(a.split(Split::kTest).size(), 10u);
  for (std::size_t i = 0; i < a.triplets.size(); ++i) {
    EXPECT_EQ(a.triplets[i].asg, b.triplets[i].asg);
    EXPECT_EQ(a.triplets[i].caption, b.triplets[i].caption);
    const auto& rec = a.triplets[i];
    EXPECT_TRUE(asg::is_valid(rec.asg));
    EXPECT_EQ(rec.caption, world.render_caption(a.scenes.at(rec.scene_id), rec.asg));
    EXPECT_LE(rec.caption.size(), cfg.sampling.max_tokens);
  }
}

TEST(Dataset, SaveLoadRoundTrip) {
  const auto cfg = small_config(12, 4);
  const synth::World world(cfg.world);
  const Dataset ds = generate_dataset(world, cfg);
  const auto dir = scratch("roundtrip");
  save_dataset(dir, ds, world);
  const Dataset back = load_dataset(dir);
  EXPECT_EQ(back.config.to_json(), ds.config.to_json());
  ASSERT_EQ(back.scenes.size(), ds.scenes.size());
  for (std::size_t i = 0; i < ds.scenes.size(); ++i) {
    EXPECT_EQ(back.scenes[i].to_json(), ds.scenes[i].to_json());
  }
  ASSERT_EQ(back.triplets.size(), ds.triplets.size());
  for (std::size_t i = 0; i < ds.triplets.size(); ++i) {
    EXPECT_EQ(back.triplets[i].asg, ds.triplets[i].asg);
    EXPECT_EQ(back.triplets[i].caption, ds.triplets[i].caption);
    EXPECT_EQ(back.triplets[i].split, ds.triplets[i].split);
  }
  fs::remove_all(dir);
}

TEST(Dataset, LoadRejectsDanglingSceneReference) {
  const auto cfg = small_config(3, 1);
  const synth::World world(cfg.world);
  Dataset ds = generate_dataset(world, cfg);
  ds.triplets[0].scene_id = 99;
  const auto dir = scratch("dangling");
  save_dataset(dir, ds, world);
  EXPECT_THROW(load_dataset(dir), ContractError);
  fs::remove_all(dir);
}

TEST(Dataset, GenDataWritesClassifier) {
  const auto dir = scratch("gendata");
  const auto summary = gen_data(dir, small_config(5, 2));
  EXPECT_EQ(summary.scenes, 7u);
  EXPECT_EQ(summary.triplets, 7u);
  EXPECT_GT(summary.relclf.train_examples, 0u);
  for (const char* f : {"dataset.json", "world.json", "vocab.json", "scenes.jsonl", "triplets.jsonl"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  EXPECT_NO_THROW(synth::RelationClassifier::load(dir / "relclf"));
  fs::remove_all(dir);
}

TEST(TrainConfig, ValidationAndJson) {
  TrainConfig c;
  EXPECT_NO_THROW(c.validate());
  TrainConfig bad = c;
  bad.learning_rate = 0.0;
  EXPECT_THROW(bad.validate(), ContractError);
  bad = c;
  bad.content_attn = false;
  bad.flow_attn = false;
  EXPECT_THROW(bad.validate(), ContractError);
  bad = c;
  bad.epochs = -1;
  EXPECT_THROW(bad.validate(), ContractError);

  c.dim = 24;
  c.graph_update = false;
  c.seed = 99;
  const TrainConfig back = TrainConfig::from_json(c.to_json());
  EXPECT_EQ(back.to_json(), c.to_json());
  EXPECT_THROW(TrainConfig::from_json(nlohmann::json{{"dim", "wide"}}), ContractError);
}

class HarnessTrain : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    cfg_ = new DatasetConfig(small_config(16, 8));
    world_ = new synth::World(cfg_->world);
    ds_ = new Dataset(generate_dataset(*world_, *cfg_));
  }
  static void TearDownTestSuite() {
    delete ds_;
    delete world_;
    delete cfg_;
  }
  static DatasetConfig* cfg_;
  static synth::World* world_;
  static Dataset* ds_;
};
DatasetConfig* HarnessTrain::cfg_ = nullptr;
synth::World* HarnessTrain::world_ = nullptr;
Dataset* HarnessTrain::ds_ = nullptr;

TEST_F(HarnessTrain, EmptyDatasetRejected) {
  const auto tc = tiny_train(1);
  dec::CaptionModel model(tc.model_config(world_->vocab()), 1);
  EXPECT_THROW(train(model, {}, world_->vocab(), tc), ContractError);
}

TEST_F(HarnessTrain, ZeroEpochsLeavesInitialization) {
  const auto tc = tiny_train(0);
  dec::CaptionModel model(tc.model_config(world_->vocab()), 5);
  const auto before = flat(model.params());
  const auto res = train(model, triplets(*world_, *ds_, Split::kTrain), world_->vocab(), tc);
  EXPECT_TRUE(res.curve.empty());
  EXPECT_EQ(flat(model.params()), before);
}

TEST_F(HarnessTrain, TrainingIsDeterministic) {
  const auto tc = tiny_train(2);
  const auto data = triplets(*world_, *ds_, Split::kTrain);
  dec::CaptionModel a(tc.model_config(world_->vocab()), 5);
  dec::CaptionModel b(tc.model_config(world_->vocab()), 5);
  const auto ra = train(a, data, world_->vocab(), tc);
  const auto rb = train(b, data, world_->vocab(), tc);
  ASSERT_EQ(ra.curve.size(), 2u);
  EXPECT_EQ(ra.curve[1].loss_per_token, rb.curve[1].loss_per_token);
  EXPECT_EQ(flat(a.params()), flat(b.params()));
}

TEST_F(HarnessTrain, SmallCorpusLossDecreases) {
  auto tc = tiny_train(150);
  tc.batch = 8;
  tc.learning_rate = 3e-3;
  auto data = triplets(*world_, *ds_, Split::kTrain);
  data.resize(8);
  dec::CaptionModel model(tc.model_config(world_->vocab()), 3);
  int calls = 0;
  const auto res = train(model, data, world_->vocab(), tc, [&](const EpochStats& s) {
    ++calls;
    EXPECT_EQ(s.epoch, calls);
    EXPECT_GE(s.seconds, 0.0);
  });
  ASSERT_EQ(res.curve.size(), 150u);
  EXPECT_EQ(calls, 150);
  // One full-batch Adam step per epoch: the curve should fall almost monotonically.
  for (std::size_t i = 1; i < res.curve.size(); ++i) {
    EXPECT_LE(res.curve[i].loss_per_token, res.curve[i - 1].loss_per_token + 1e-3) << i;
  }
  EXPECT_LT(res.curve.back().loss_per_token, 0.7 * res.curve.front().loss_per_token);
  EXPECT_NEAR(evaluate_loss(model, data, world_->vocab()), res.curve.back().loss_per_token,
              0.2 * res.curve.back().loss_per_token);
}

TEST_F(HarnessTrain, NonFiniteFeaturesAbortWithDiagnostic) {
  const auto tc = tiny_train(1);
  auto data = triplets(*world_, *ds_, Split::kTrain);
  data.resize(2);
  data[1].features.nodes.values()[0] = std::numeric_limits<double>::quiet_NaN();
  dec::CaptionModel model(tc.model_config(world_->vocab()), 1);
  try {
    train(model, data, world_->vocab(), tc);
    FAIL() << "expected NumericError";
  } catch (const NumericError& ex) {
    EXPECT_NE(std::string(ex.what()).find("epoch 1"), std::string::npos) << ex.what();
  }
}

TEST_F(HarnessTrain, CheckpointRoundTripDecodesIdentically) {
  const auto tc = tiny_train(1);
  const auto data = triplets(*world_, *ds_, Split::kTrain);
  dec::CaptionModel model(tc.model_config(world_->vocab()), 8);
  train(model, data, world_->vocab(), tc);
  const auto dir = scratch("ckpt");
  save_checkpoint(dir, model, tc, world_->vocab());
  Checkpoint back = load_checkpoint(dir);
  EXPECT_EQ(back.train.to_json(), tc.to_json());
  EXPECT_EQ(back.vocab.to_json(), world_->vocab().to_json());
  EXPECT_EQ(flat(back.model.params()), flat(model.params()));
  for (std::size_t i = 0; i < 4; ++i) {
    const auto h1 = model.beam_search(data[i].asg, data[i].features, 3, tc.max_len);
    const auto h2 = back.model.beam_search(data[i].asg, data[i].features, 3, tc.max_len);
    ASSERT_EQ(h1.size(), h2.size());
    for (std::size_t k = 0; k < h1.size(); ++k) {
      EXPECT_EQ(h1[k].tokens, h2[k].tokens);
      EXPECT_EQ(h1[k].log_prob, h2[k].log_prob);
    }
  }
  fs::remove_all(dir);
}

TEST_F(HarnessTrain, EveryAblationTrainsAndDecodes) {
  auto data = triplets(*world_, *ds_, Split::kTrain);
  data.resize(4);
  for (int mask = 0; mask < 64; ++mask) {
    TrainConfig tc = tiny_train(1);
    tc.role_embed = mask & 1;
    tc.mrgcn = mask & 2;
    tc.content_attn = mask & 4;
    tc.flow_attn = mask & 8;
    tc.graph_update = mask & 16;
    tc.beam_search = mask & 32;
    if (!tc.content_attn && !tc.flow_attn) continue;
    SCOPED_TRACE(tc.to_json().dump());
    dec::CaptionModel model(tc.model_config(world_->vocab()), 2);
    const auto res = train(model, data, world_->vocab(), tc);
    ASSERT_EQ(res.curve.size(), 1u);
    EXPECT_TRUE(std::isfinite(res.curve[0].loss_per_token));
    const auto h = model.caption(data[0].asg, data[0].features, tc.beam);
    EXPECT_LE(h.tokens.size(), tc.max_len);
  }
}

TEST_F(HarnessTrain, BeamOfOneIsGreedy) {
  const auto tc = tiny_train(2);
  const auto data = triplets(*world_, *ds_, Split::kTrain);
  dec::CaptionModel model(tc.model_config(world_->vocab()), 4);
  train(model, data, world_->vocab(), tc);
  for (std::size_t i = 0; i < 6; ++i) {
    const auto b = model.beam_search(data[i].asg, data[i].features, 1, tc.max_len);
    const auto g = model.greedy(data[i].asg, data[i].features, tc.max_len);
    ASSERT_EQ(b.size(), 1u);
    EXPECT_EQ(b[0].tokens, g.tokens);
    EXPECT_NEAR(b[0].log_prob, g.log_prob, 1e-12);
  }
}

TEST_F(HarnessTrain, ControlReportOnUntrainedModel) {
  const auto tc = tiny_train(0);
  dec::CaptionModel model(tc.model_config(world_->vocab()), 4);
  const auto records = ds_->split(Split::kTest);
  const auto rep = evaluate_control(model, *world_, *ds_, records, 2);
  ASSERT_EQ(rep.instances.size(), records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    EXPECT_EQ(rep.instances[i].reference, records[i]->caption);
  }
  for (double v : {rep.exact_objects, rep.exact_attributes, rep.exact_relations}) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
  const auto j = rep.summary.to_json();
  EXPECT_EQ(j.size(), 10u);
  ASSERT_TRUE(rep.summary.g.has_value());
  EXPECT_GE(*rep.summary.g, 0.0);
}

TEST_F(HarnessTrain, ReferenceCaptionsScorePerfectly) {
  std::vector<std::vector<std::string>> refs;
  for (const auto* rec : ds_->split(Split::kTest)) refs.push_back(rec->caption);
  const auto rep = score_captions(refs, refs, world_->vocab());
  ASSERT_TRUE(rep.summary.g.has_value());
  EXPECT_EQ(*rep.summary.g, 0.0);
  EXPECT_NEAR(*rep.summary.bleu4, 1.0, 1e-9);
  EXPECT_NEAR(*rep.summary.rouge_l, 1.0, 1e-9);
  EXPECT_EQ(rep.exact_objects, 1.0);
  EXPECT_EQ(rep.exact_attributes, 1.0);
  EXPECT_EQ(rep.exact_relations, 1.0);
}

TEST_F(HarnessTrain, DiversityCaptionSetSizes) {
  const auto tc = tiny_train(0);
  dec::CaptionModel model(tc.model_config(world_->vocab()), 4);
  synth::RelationClassifier clf(world_->feature_dim(), 1);
  std::vector<synth::Scene> scenes(ds_->scenes.begin(), ds_->scenes.begin() + 3);

  DiversityOptions one;
  one.samples = 1;
  one.beam = 2;
  const auto r1 = evaluate_diversity(model, *world_, scenes, clf, one);
  ASSERT_EQ(r1.scenes.size(), 3u);
  EXPECT_FALSE(r1.sampled.self_cider.has_value());
  for (const auto& s : r1.scenes) EXPECT_EQ(s.captions.size(), 1u);

  DiversityOptions five;
  five.beam = 2;
  for (const auto* rec : ds_->split(Split::kTrain)) five.df_corpus.push_back(rec->caption);
  const auto r5 = evaluate_diversity(model, *world_, scenes, clf, five);
  for (const auto& s : r5.scenes) {
    EXPECT_EQ(s.captions.size(), 5u);
    EXPECT_LE(s.distinct_asgs, 5u);
    EXPECT_GE(s.distinct_asgs, 1u);
  }
  ASSERT_TRUE(r5.sampled.self_cider.has_value());
  EXPECT_GE(*r5.sampled.self_cider, 0.0);
  EXPECT_LE(*r5.sampled.self_cider, 1.0);

  DiversityOptions zero;
  zero.samples = 0;
  EXPECT_THROW(evaluate_diversity(model, *world_, scenes, clf, zero), ContractError);
}

TEST_F(HarnessTrain, PerturbationCountsPairs) {
  const auto tc = tiny_train(0);
  dec::CaptionModel model(tc.model_config(world_->vocab()), 4);
  const auto records = ds_->split(Split::kTrain);
  const auto res = attribute_perturbation(model, *world_, *ds_, records, 5, 2);
  EXPECT_LE(res.pairs, 5u);
  EXPECT_GT(res.pairs, 0u);
  EXPECT_LE(res.increased, res.pairs);
  EXPECT_GE(res.rate(), 0.0);
  EXPECT_LE(res.rate(), 1.0);
}

TEST(Diagnostics, ModelGradientMatchesFiniteDifferences) {
  const auto gc = model_gradcheck(8, 3);
  EXPECT_GT(gc.parameters, 0u);
  EXPECT_GT(gc.result.coordinates, 0u);
  EXPECT_LT(gc.result.max_relative_error, 1e-4);
}

}  // namespace
}  // namespace asgcap::harness
