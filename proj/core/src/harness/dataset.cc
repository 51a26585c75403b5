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


#include "asgcap/harness/dataset.h"

#include <fstream>
#include <random>

#include "asgcap/asg/json_io.h"
#include "asgcap/common/error.h"

namespace asgcap::harness {

nlohmann::json DatasetConfig::to_json() const {
  return {{"world", world.to_json()},
          {"sampling",
           {{"max_relations", sampling.max_relations},
            {"max_standalone", sampling.max_standalone},
            {"max_tokens", sampling.max_tokens}}},
          {"num_train", num_train},
          {"num_test", num_test},
          {"seed", seed},
          {"relclf",
           {{"train_scenes", relclf.train_scenes},
            {"heldout_scenes", relclf.heldout_scenes},
            {"epochs", relclf.epochs},
            {"batch", relclf.batch},
            {"learning_rate", relclf.learning_rate},
            {"seed", relclf.seed}}}};
}

DatasetConfig DatasetConfig::from_json(const nlohmann::json& doc) {
  try {
    DatasetConfig c;
    if (doc.contains("world")) c.world = synth::WorldConfig::from_json(doc.at("world"));
    if (doc.contains("sampling")) {
      const auto& s = doc.at("sampling");
      c.sampling.max_relations = s.value("max_relations", c.sampling.max_relations);
      c.sampling.max_standalone = s.value("max_standalone", c.sampling.max_standalone);
      c.sampling.max_tokens = s.value("max_tokens", c.sampling.max_tokens);
    }
    c.num_train = doc.value("num_train", c.num_train);
    c.num_test = doc.value("num_test", c.num_test);
    c.seed = doc.value("seed", c.seed);
    if (doc.contains("relclf")) {
      const auto& r = doc.at("relclf");
      c.relclf.train_scenes = r.value("train_scenes", c.relclf.train_scenes);
      c.relclf.heldout_scenes = r.value("heldout_scenes", c.relclf.heldout_scenes);
      c.relclf.epochs = r.value("epochs", c.relclf.epochs);
      c.relclf.batch = r.value("batch", c.relclf.batch);
      c.relclf.learning_rate = r.value("learning_rate", c.relclf.learning_rate);
      c.relclf.seed = r.value("seed", c.relclf.seed);
    }
    return c;
  } catch (const nlohmann::json::exception& ex) {
    throw ContractError(std::string("malformed dataset config: ") + ex.what());
  }
}

std::vector<const TripletRecord*> Dataset::split(Split s) const {
  std::vector<const TripletRecord*> out;
  for (const auto& t : triplets) {
    if (t.split == s) out.push_back(&t);
  }
  return out;
}

std::uint64_t scene_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master * 0x9E3779B97F4A7C15ULL + index + 0x632BE59BD9B4E019ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Dataset generate_dataset(const synth::World& world, const DatasetConfig& cfg) {
  if (cfg.num_train + cfg.num_test == 0) throw ContractError("dataset: no triplets requested");
  Dataset ds;
  ds.config = cfg;
  const std::size_t total = cfg.num_train + cfg.num_test;
  for (std::size_t i = 0; i < total; ++i) {
    const std::uint64_t seed = scene_seed(cfg.seed, i);
    ds.scenes.push_back(world.gen_scene(seed));
    std::mt19937_64 rng(seed ^ 0xA5A5A5A5ULL);
    TripletRecord rec;
    rec.scene_id = i;
    rec.split = i < cfg.num_train ? Split::kTrain : Split::kTest;
    rec.asg = world.random_grounded_asg(ds.scenes.back(), rng, cfg.sampling);
    rec.caption = world.render_caption(ds.scenes.back(), rec.asg);
    ds.triplets.push_back(std::move(rec));
  }
  return ds;
}

nlohmann::json read_json(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ContractError("cannot open " + file.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& ex) {
    throw ContractError("malformed JSON in " + file.string() + ": " + ex.what());
  }
}

void write_json(const std::filesystem::path& file, const nlohmann::json& doc) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file);
  if (!out) throw ContractError("cannot write " + file.string());
  out << doc.dump(2) << "\n";
}

namespace {

std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ContractError("cannot open " + file.string());
  std::vector<nlohmann::json> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& ex) {
      throw ContractError(file.string() + ":" + std::to_string(lineno) + ": " + ex.what());
    }
  }
  return out;
}

}  // namespace

void save_dataset(const std::filesystem::path& dir, const Dataset& ds, const synth::World& world) {
  std::filesystem::create_directories(dir);
  write_json(dir / "dataset.json", ds.config.to_json());
  write_json(dir / "world.json", world.config().to_json());
  write_json(dir / "vocab.json", world.vocab().to_json());
  std::ofstream scenes(dir / "scenes.jsonl");
  for (std::size_t i = 0; i < ds.scenes.size(); ++i) {
    nlohmann::json j = ds.scenes[i].to_json();
    j["id"] = i;
    scenes << j.dump() << "\n";
  }
  std::ofstream trip(dir / "triplets.jsonl");
  for (const auto& t : ds.triplets) {
    trip << nlohmann::json{{"scene_id", t.scene_id},
                           {"split", t.split == Split::kTrain ? "train" : "test"},
                           {"asg", asg::to_json(t.asg)},
                           {"caption", t.caption}}
                .dump()
         << "\n";
  }
  if (!scenes || !trip) throw ContractError("failed writing dataset files in " + dir.string());
}

Dataset load_dataset(const std::filesystem::path& dir) {
  Dataset ds;
  ds.config = DatasetConfig::from_json(read_json(dir / "dataset.json"));
  ds.config.world = synth::WorldConfig::from_json(read_json(dir / "world.json"));
  for (const auto& j : read_jsonl(dir / "scenes.jsonl")) {
    if (j.value("id", ds.scenes.size()) != ds.scenes.size()) {
      throw ContractError("scenes.jsonl: ids must be 0, 1, 2, ...");
    }
    ds.scenes.push_back(synth::Scene::from_json(j));
  }
  for (const auto& j : read_jsonl(dir / "triplets.jsonl")) {
    try {
      TripletRecord rec;
      rec.scene_id = j.at("scene_id").get<std::size_t>();
      const auto split = j.at("split").get<std::string>();
      if (split != "train" && split != "test") throw ContractError("unknown split " + split);
      rec.split = split == "train" ? Split::kTrain : Split::kTest;
      rec.asg = asg::asg_from_json(j.at("asg"));
      rec.caption = j.at("caption").get<std::vector<std::string>>();
      if (rec.scene_id >= ds.scenes.size()) {
        throw ContractError("triplet refers to missing scene " + std::to_string(rec.scene_id));
      }
      asg::require_valid(rec.asg, "triplets.jsonl");
      ds.triplets.push_back(std::move(rec));
    } catch (const nlohmann::json::exception& ex) {
      throw ContractError(std::string("malformed triplet record: ") + ex.what());
    }
  }
  return ds;
}

GenDataSummary gen_data(const std::filesystem::path& dir, const DatasetConfig& cfg) {
  const synth::World world(cfg.world);
  const Dataset ds = generate_dataset(world, cfg);
  save_dataset(dir, ds, world);
  synth::RelationClassifier clf(world.feature_dim(), cfg.relclf.seed);
  GenDataSummary summary;
  summary.scenes = ds.scenes.size();
  summary.triplets = ds.triplets.size();
  summary.relclf = train_relation_classifier(clf, world, cfg.relclf);
  clf.save(dir / "relclf");
  write_json(dir / "relclf" / "training.json",
             {{"loss_curve", summary.relclf.loss_curve},
              {"train_examples", summary.relclf.train_examples},
              {"heldout_examples", summary.relclf.heldout_examples},
              {"heldout_balanced_accuracy", summary.relclf.heldout_balanced_accuracy}});
  return summary;
}

synth::Triplet materialize(const synth::World& world, const Dataset& ds, const TripletRecord& rec) {
  const synth::Scene& scene = ds.scenes.at(rec.scene_id);
  synth::Triplet t;
  t.asg = rec.asg;
  t.features = world.features_for(scene, rec.asg);
  t.caption = rec.caption;
  return t;
}

}  // namespace asgcap::harness
