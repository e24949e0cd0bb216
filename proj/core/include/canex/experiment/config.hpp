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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "canex/attack/attack.hpp"
#include "canex/data/canary.hpp"
#include "canex/nlu/config.hpp"
#include "canex/training/trainer.hpp"

namespace canex::experiment {

// A subset of the three defenses.
struct DefenseSet {
  bool dropout = false;          // D
  bool early_stopping = false;   // ES
  bool char_embeddings = false;  // CE

  // "none", or the members joined with '+' in D, ES, CE order.
  std::string name() const;
  // Accepts "none", "" and '+'-joined members in any order. Throws
  // InvalidArgument for unknown members or repeats.
  static DefenseSet parse(const std::string& text);
  // The 8 subsets in a fixed order, "none" first.
  static std::vector<DefenseSet> all();

  bool operator==(const DefenseSet&) const = default;
};

struct CorpusSource {
  std::optional<std::filesystem::path> path;  // JSON-lines file; synth when absent
  std::size_t synth_size = 2000;
  std::uint64_t synth_seed = 7;
  double synth_rare_rate = 0.02;
  double val_fraction = 0.1;
};

inline constexpr int kSchemaVersion = 1;

struct ExperimentConfig {
  int schema_version = kSchemaVersion;
  CorpusSource corpus;
  std::optional<std::filesystem::path> embeddings_path;
  std::vector<data::CanaryPattern> patterns{data::CanaryPattern::kPin};
  std::vector<int> n_values{4};
  std::vector<int> r_values{100};
  int trials = 10;
  std::vector<DefenseSet> defenses{DefenseSet{}};
  data::DigitStyle digit_style = data::DigitStyle::kWords;
  nlu::ModelConfig model;
  training::TrainConfig train;
  attack::AttackConfig attack;
  // Also run the continuous-embedding baseline on every trained model.
  bool continuous_baseline = false;
  bool save_checkpoints = false;
  std::filesystem::path output_dir = "results";
  std::uint64_t master_seed = 0;
  int workers = 1;

  // Throws InvalidArgument for empty grids, bad values or an unsupported
  // schema version.
  void validate() const;
};

nlohmann::json to_json(const ExperimentConfig& c);
// Throws ParseError for malformed JSON or wrong types.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

// SHA-256 of the canonical JSON form, output directory excluded.
std::string config_hash(const ExperimentConfig& c);

// Worker count: CANEX_WORKERS when set to a positive integer, else
// `configured`.
int resolve_workers(int configured);

}  // namespace canex::experiment
