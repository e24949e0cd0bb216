// Copyright 2026 The canex Authors. All Rights Reserved.
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

#include "canex/experiment/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "canex/error.hpp"
#include "canex/numerics/hash.hpp"

namespace canex::experiment {

std::string DefenseSet::name() const {
  std::string out;
  auto add = [&out](bool on, const char* tag) {
    if (!on) return;
    if (!out.empty()) out += '+';
    out += tag;
  };
  add(dropout, "D");
  add(early_stopping, "ES");
  add(char_embeddings, "CE");
  return out.empty() ? "none" : out;
}

DefenseSet DefenseSet::parse(const std::string& text) {
  DefenseSet d;
  if (text.empty() || text == "none") return d;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, '+')) {
    bool* slot = part == "D" ? &d.dropout : part == "ES" ? &d.early_stopping : part == "CE" ? &d.char_embeddings : nullptr;
    if (slot == nullptr) throw InvalidArgument("unknown defense '" + part + "' (expected D, ES or CE)");
    if (*slot) throw InvalidArgument("defense '" + part + "' listed twice");
    *slot = true;
  }
  return d;
}

std::vector<DefenseSet> DefenseSet::all() {
  std::vector<DefenseSet> out;
  for (int mask = 0; mask < 8; ++mask) out.push_back({(mask & 1) != 0, (mask & 2) != 0, (mask & 4) != 0});
  return out;
}

void ExperimentConfig::validate() const {
  if (schema_version != kSchemaVersion) {
    throw InvalidArgument("unsupported schema_version " + std::to_string(schema_version));
  }
  if (patterns.empty() || n_values.empty() || r_values.empty() || defenses.empty()) {
    throw InvalidArgument("experiment grid has an empty axis");
  }
  for (int n : n_values) {
    if (n < 1) throw InvalidArgument("n values must be >= 1");
  }
  for (int r : r_values) {
    if (r < 1) throw InvalidArgument("R values must be >= 1");
  }
  if (trials < 1) throw InvalidArgument("trials must be >= 1");
  if (workers < 1) throw InvalidArgument("workers must be >= 1");
  if (!(corpus.val_fraction >= 0.0 && corpus.val_fraction < 1.0)) {
    throw InvalidArgument("corpus.val_fraction must lie in [0, 1)");
  }
  if (!corpus.path && corpus.synth_size < 1) throw InvalidArgument("corpus.synth.size must be >= 1");
  train.validate();
  attack.validate();
}

namespace {

nlohmann::json body_json(const ExperimentConfig& c) {
  nlohmann::json corpus = {{"val_fraction", c.corpus.val_fraction}};
  if (c.corpus.path) {
    corpus["path"] = c.corpus.path->string();
  } else {
    corpus["synth"] = {{"size", c.corpus.synth_size}, {"seed", c.corpus.synth_seed}, {"rare_rate", c.corpus.synth_rare_rate}};
  }
  nlohmann::json patterns = nlohmann::json::array();
  for (auto p : c.patterns) patterns.push_back(data::to_string(p));
  nlohmann::json defenses = nlohmann::json::array();
  for (const auto& d : c.defenses) defenses.push_back(d.name());
  nlohmann::json j = {{"schema_version", c.schema_version},
                      {"corpus", corpus},
                      {"patterns", patterns},
                      {"n", c.n_values},
                      {"R", c.r_values},
                      {"trials", c.trials},
                      {"defenses", defenses},
                      {"digit_style", c.digit_style == data::DigitStyle::kWords ? "words" : "numerals"},
                      {"model", c.model},
                      {"train", c.train},
                      {"attack", c.attack},
                      {"continuous_baseline", c.continuous_baseline},
                      {"save_checkpoints", c.save_checkpoints},
                      {"master_seed", c.master_seed}};
  if (c.embeddings_path) j["embeddings_path"] = c.embeddings_path->string();
  return j;
}

}  // namespace

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j = body_json(c);
  j["output_dir"] = c.output_dir.string();
  j["workers"] = c.workers;
  return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  try {
    if (!j.is_object()) throw ParseError("experiment config must be a JSON object");
    c.schema_version = j.at("schema_version").get<int>();
    if (j.contains("corpus")) {
      const auto& cj = j.at("corpus");
      c.corpus.val_fraction = cj.value("val_fraction", c.corpus.val_fraction);
      if (cj.contains("path")) c.corpus.path = cj.at("path").get<std::string>();
      if (cj.contains("synth")) {
        const auto& s = cj.at("synth");
        c.corpus.synth_size = s.value("size", c.corpus.synth_size);
        c.corpus.synth_seed = s.value("seed", c.corpus.synth_seed);
        c.corpus.synth_rare_rate = s.value("rare_rate", c.corpus.synth_rare_rate);
      }
    }
    if (j.contains("embeddings_path")) c.embeddings_path = j.at("embeddings_path").get<std::string>();
    if (j.contains("patterns")) {
      c.patterns.clear();
      for (const auto& p : j.at("patterns")) c.patterns.push_back(data::parse_pattern(p.get<std::string>()));
    }
    if (j.contains("n")) c.n_values = j.at("n").get<std::vector<int>>();
    if (j.contains("R")) c.r_values = j.at("R").get<std::vector<int>>();
    c.trials = j.value("trials", c.trials);
    if (j.contains("defenses")) {
      c.defenses.clear();
      const auto& dj = j.at("defenses");
      if (dj.is_string() && dj.get<std::string>() == "all") {
        c.defenses = DefenseSet::all();
      } else {
        for (const auto& d : dj) c.defenses.push_back(DefenseSet::parse(d.get<std::string>()));
      }
    }
    const std::string style = j.value("digit_style", std::string("words"));
    if (style != "words" && style != "numerals") throw ParseError("digit_style must be words or numerals");
    c.digit_style = style == "words" ? data::DigitStyle::kWords : data::DigitStyle::kNumerals;
    if (j.contains("model")) c.model = j.at("model").get<nlu::ModelConfig>();
    if (j.contains("train")) c.train = j.at("train").get<training::TrainConfig>();
    if (j.contains("attack")) c.attack = j.at("attack").get<attack::AttackConfig>();
    c.continuous_baseline = j.value("continuous_baseline", c.continuous_baseline);
    c.save_checkpoints = j.value("save_checkpoints", c.save_checkpoints);
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    c.master_seed = j.value("master_seed", c.master_seed);
    c.workers = j.value("workers", c.workers);
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("experiment config: ") + ex.what());
  } catch (const InvalidArgument& ex) {
    throw ParseError(std::string("experiment config: ") + ex.what());
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open experiment config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(path.string() + ": " + ex.what());
  }
  return config_from_json(j);
}

std::string config_hash(const ExperimentConfig& c) { return numerics::sha256_hex(body_json(c).dump()); }

int resolve_workers(int configured) {
  if (const char* env = std::getenv("CANEX_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  return configured;
}

}  // namespace canex::experiment
