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


// Command-line front end: data generation, training, captioning and
// evaluation.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include "CLI11.hpp"
#include "asgcap/asg/json_io.h"
#include "asgcap/asg/sample.h"
#include "asgcap/common/error.h"
#include "asgcap/harness/dataset.h"
#include "asgcap/harness/diagnostics.h"
#include "asgcap/harness/eval.h"
#include "asgcap/harness/train.h"

namespace fs = std::filesystem;
using namespace asgcap;

namespace {

struct TrainArgs {
  std::string data;
  std::string out;
  harness::TrainConfig cfg;
  bool no_role = false, no_rgcn = false, no_ctn = false, no_flow = false, no_gupdt = false,
       greedy = false;
  std::size_t limit = 0;
};

int run_gen_data(const std::string& config, const std::string& out, std::optional<std::uint64_t> seed) {
  harness::DatasetConfig cfg;
  if (!config.empty()) cfg = harness::DatasetConfig::from_json(harness::read_json(config));
  if (seed) cfg.seed = *seed;
  const auto summary = harness::gen_data(out, cfg);
  std::cout << "wrote " << summary.scenes << " scenes and " << summary.triplets << " triplets to "
            << out << "\nrelation classifier: held-out balanced accuracy "
            << summary.relclf.heldout_balanced_accuracy << " on " << summary.relclf.heldout_examples
            << " pairs\n";
  return 0;
}

int run_train(TrainArgs a) {
  auto& c = a.cfg;
  c.role_embed = !a.no_role;
  c.mrgcn = !a.no_rgcn;
  c.content_attn = !a.no_ctn;
  c.flow_attn = !a.no_flow;
  c.graph_update = !a.no_gupdt;
  c.beam_search = !a.greedy;
  const auto ds = harness::load_dataset(a.data);
  const synth::World world(ds.config.world);
  std::vector<synth::Triplet> data;
  for (const auto* rec : ds.split(harness::Split::kTrain)) {
    if (a.limit > 0 && data.size() >= a.limit) break;
    data.push_back(harness::materialize(world, ds, *rec));
  }
  dec::CaptionModel model(c.model_config(world.vocab()), c.seed);
  std::cout << "training on " << data.size() << " triplets, " << model.params().num_scalars()
            << " parameters\n";
  const auto result = harness::train(model, data, world.vocab(), c, [](const harness::EpochStats& s) {
    std::cout << "epoch " << s.epoch << " loss/token " << s.loss_per_token << " (" << s.seconds
              << " s)" << std::endl;
  });
  harness::save_checkpoint(a.out, model, c, world.vocab());
  harness::write_json(fs::path(a.out) / "world.json", world.config().to_json());
  nlohmann::json curve = nlohmann::json::array();
  for (const auto& s : result.curve) {
    curve.push_back({{"epoch", s.epoch}, {"loss_per_token", s.loss_per_token}, {"seconds", s.seconds}});
  }
  harness::write_json(fs::path(a.out) / "loss_curve.json", curve);
  return 0;
}

synth::World world_for(const fs::path& ckpt, const std::string& override_path) {
  const fs::path p = override_path.empty() ? ckpt / "world.json" : fs::path(override_path);
  return synth::World(synth::WorldConfig::from_json(harness::read_json(p)));
}

int run_caption(const std::string& ckpt, const std::string& scene_path, const std::string& asg_path,
                std::size_t beam, const std::string& trace, const std::string& world_path) {
  auto cp = harness::load_checkpoint(ckpt);
  const synth::World world = world_for(ckpt, world_path);
  const auto scene = synth::Scene::from_json(harness::read_json(scene_path));
  const auto g = asg::asg_from_json(harness::read_json(asg_path));
  const auto violations = asg::validate_asg(g);
  if (!violations.empty()) {
    for (const auto& v : violations) std::cerr << "invalid ASG: node " << v.node << ": " << v.message << "\n";
    return 2;
  }
  const auto hyp = cp.model.caption(g, world.features_for(scene, g), beam);
  const auto words = cp.vocab.decode(hyp.tokens);
  for (std::size_t i = 0; i < words.size(); ++i) std::cout << (i ? " " : "") << words[i];
  std::cout << "\n";
  if (!trace.empty()) {
    std::vector<std::string> tokens;
    for (std::size_t i = 0; i < cp.vocab.size(); ++i) tokens.push_back(cp.vocab.token(static_cast<int>(i)));
    harness::write_json(trace, {{"caption", words},
                                {"log_prob", hyp.log_prob},
                                {"steps", dec::trace_to_json(hyp, tokens)}});
  }
  return 0;
}

int run_eval_control(const std::string& ckpt, const std::string& data, const std::string& report,
                     std::optional<std::size_t> beam, std::size_t limit) {
  auto cp = harness::load_checkpoint(ckpt);
  const auto ds = harness::load_dataset(data);
  const synth::World world(ds.config.world);
  auto records = ds.split(harness::Split::kTest);
  if (limit > 0 && records.size() > limit) records.resize(limit);
  const auto rep = harness::evaluate_control(cp.model, world, ds, records, beam.value_or(cp.train.beam));
  harness::write_json(report, rep.to_json());
  std::cout << rep.summary.to_json().dump(2) << "\n";
  return 0;
}

int run_eval_diversity(const std::string& ckpt, const std::string& data, const std::string& report,
                       std::size_t samples, std::size_t scenes, std::uint64_t seed) {
  auto cp = harness::load_checkpoint(ckpt);
  const auto ds = harness::load_dataset(data);
  const synth::World world(ds.config.world);
  const auto clf = synth::RelationClassifier::load(fs::path(data) / "relclf");
  std::vector<synth::Scene> picked;
  for (const auto* rec : ds.split(harness::Split::kTest)) {
    if (picked.size() >= scenes) break;
    picked.push_back(ds.scenes.at(rec->scene_id));
  }
  harness::DiversityOptions opts;
  opts.samples = samples;
  opts.beam = cp.train.beam;
  opts.seed = seed;
  for (const auto* rec : ds.split(harness::Split::kTrain)) opts.df_corpus.push_back(rec->caption);
  const auto rep = harness::evaluate_diversity(cp.model, world, picked, clf, opts);
  harness::write_json(report, rep.to_json());
  std::cout << nlohmann::json{{"sampled", rep.sampled.to_json()}, {"repeated", rep.repeated.to_json()}}.dump(2)
            << "\n";
  return 0;
}

int run_sample_asg(const std::string& scene_path, const std::string& mode, std::uint64_t seed,
                   const std::string& world_path, const std::string& relclf) {
  const auto scene = synth::Scene::from_json(harness::read_json(scene_path));
  const synth::World world(world_path.empty() ? synth::WorldConfig{}
                                              : synth::WorldConfig::from_json(harness::read_json(world_path)));
  std::mt19937_64 rng(seed);
  asg::AbstractSceneGraph g;
  if (mode == "subgraph") {
    g = asg::sample_subgraph(world.full_asg(scene), rng);
  } else {
    if (relclf.empty()) throw ContractError("sample-asg --mode auto needs --relclf");
    const auto clf = synth::RelationClassifier::load(relclf);
    g = synth::auto_generate_asg(world, scene, synth::jitter_proposals(scene, rng), clf);
  }
  std::cout << asg::to_json(g).dump() << "\n";
  return 0;
}

int run_gradcheck(std::size_t dim, std::uint64_t seed) {
  const auto r = harness::model_gradcheck(dim, seed);
  std::cout << "parameters " << r.parameters << "\nmax relative error " << r.result.max_relative_error
            << "\nseconds " << r.seconds << "\n";
  return r.result.max_relative_error < 1e-4 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Controllable captioning from abstract scene graphs"};
  app.require_subcommand(1);
  int rc = 0;

  std::string config, out, data, ckpt, scene, asg_file, trace, report, mode = "subgraph", world, relclf;
  std::optional<std::uint64_t> gen_seed;
  std::uint64_t seed = 1;
  std::size_t beam = 5, samples = 5, scenes = 100, dim = 16, limit = 0;
  std::optional<std::size_t> eval_beam;

  auto* gen = app.add_subcommand("gen-data", "Generate scenes, triplets and the relation classifier");
  gen->add_option("--config", config, "Dataset config JSON");
  gen->add_option("--out", out, "Output directory")->required();
  gen->add_option("--seed", gen_seed, "Master seed (overrides the config)");
  gen->callback([&] { rc = run_gen_data(config, out, gen_seed); });

  TrainArgs ta;
  auto* tr = app.add_subcommand("train", "Train a captioning model");
  tr->add_option("--data", ta.data, "Dataset directory")->required();
  tr->add_option("--out", ta.out, "Checkpoint directory")->required();
  tr->add_option("--lr", ta.cfg.learning_rate, "Adam learning rate");
  tr->add_option("--batch", ta.cfg.batch, "Batch size");
  tr->add_option("--dim", ta.cfg.dim, "Hidden size d");
  tr->add_option("--layers", ta.cfg.layers, "MR-GCN layers");
  tr->add_option("--epochs", ta.cfg.epochs, "Epochs");
  tr->add_option("--seed", ta.cfg.seed, "Initialization and shuffling seed");
  tr->add_option("--beam", ta.cfg.beam, "Beam width stored with the checkpoint");
  tr->add_option("--limit", ta.limit, "Use only the first N training triplets");
  tr->add_flag("--no-role", ta.no_role, "Disable role embedding");
  tr->add_flag("--no-rgcn", ta.no_rgcn, "Disable the MR-GCN layers");
  tr->add_flag("--no-ctn", ta.no_ctn, "Disable content attention");
  tr->add_flag("--no-flow", ta.no_flow, "Disable flow attention");
  tr->add_flag("--no-gupdt", ta.no_gupdt, "Disable graph updating");
  tr->add_flag("--greedy", ta.greedy, "Decode greedily instead of beam search");
  tr->callback([&] { rc = run_train(ta); });

  auto* cap = app.add_subcommand("caption", "Caption one scene under one ASG");
  cap->add_option("--ckpt", ckpt, "Checkpoint directory")->required();
  cap->add_option("--scene", scene, "Scene JSON")->required();
  cap->add_option("--asg", asg_file, "ASG JSON")->required();
  cap->add_option("--beam", beam, "Beam width");
  cap->add_option("--trace", trace, "Write the attention trace here");
  cap->add_option("--world", world, "World config (defaults to the checkpoint's)");
  cap->callback([&] { rc = run_caption(ckpt, scene, asg_file, beam, trace, world); });

  auto* ec = app.add_subcommand("eval-control", "Controllability metrics on the test split");
  ec->add_option("--ckpt", ckpt, "Checkpoint directory")->required();
  ec->add_option("--data", data, "Dataset directory")->required();
  ec->add_option("--report", report, "Report JSON path")->required();
  ec->add_option("--beam", eval_beam, "Beam width (defaults to the checkpoint's)");
  ec->add_option("--limit", limit, "Evaluate only the first N test triplets");
  ec->callback([&] { rc = run_eval_control(ckpt, data, report, eval_beam, limit); });

  auto* ed = app.add_subcommand("eval-diversity", "Diversity of sampled-subgraph captions");
  ed->add_option("--ckpt", ckpt, "Checkpoint directory")->required();
  ed->add_option("--data", data, "Dataset directory")->required();
  ed->add_option("--report", report, "Report JSON path")->required();
  ed->add_option("--samples", samples, "Captions per scene");
  ed->add_option("--scenes", scenes, "Number of test scenes");
  ed->add_option("--seed", seed, "Sampling seed");
  ed->callback([&] { rc = run_eval_diversity(ckpt, data, report, samples, scenes, seed); });

  auto* sa = app.add_subcommand("sample-asg", "Sample an ASG for a scene");
  sa->add_option("--scene", scene, "Scene JSON")->required();
  sa->add_option("--mode", mode, "auto or subgraph")->check(CLI::IsMember({"auto", "subgraph"}));
  sa->add_option("--seed", seed, "Seed");
  sa->add_option("--world", world, "World config JSON");
  sa->add_option("--relclf", relclf, "Relation classifier directory (auto mode)");
  sa->callback([&] { rc = run_sample_asg(scene, mode, seed, world, relclf); });

  auto* gc = app.add_subcommand("gradcheck", "Finite-difference check of the full model");
  gc->add_option("--dim", dim, "Hidden size");
  gc->add_option("--seed", seed, "Seed");
  gc->callback([&] { rc = run_gradcheck(dim, seed); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const ContractError& e) {
    std::cerr << "contract violation: " << e.what() << "\n";
    return 2;
  } catch (const asg::NoRelationshipError& e) {
    std::cerr << "contract violation: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
