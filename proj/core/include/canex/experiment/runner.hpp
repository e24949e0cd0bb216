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
#include <functional>
#include <string>
#include <vector>

#include "canex/eval/metrics.hpp"
#include "canex/experiment/config.hpp"

namespace canex::experiment {

struct CellSpec {
  data::CanaryPattern pattern = data::CanaryPattern::kPin;
  int n = 0;
  int repetitions = 0;
  DefenseSet defenses;

  // Directory name, e.g. "pin_n4_R100_D+ES".
  std::string slug() const;
};

// Cells in (pattern, n, R, defenses) order.
std::vector<CellSpec> expand_grid(const ExperimentConfig& config);

// hash(master seed, pattern, n, R, defenses, trial); independent of the
// rest of the grid.
std::uint64_t trial_seed(std::uint64_t master_seed, const CellSpec& cell, int trial);

struct TrialOutcome {
  CellSpec cell;
  int trial = 0;
  bool ok = false;
  std::string error;
  eval::TrialReport attack;
  std::optional<eval::TrialReport> baseline;
};

// One trial end to end: canary, injection, training, attack, scoring.
// Errors propagate as exceptions.
TrialOutcome run_trial(const ExperimentConfig& config, const data::Corpus& base, const CellSpec& cell, int trial,
                       const nlu::PretrainedEmbeddings* pretrained);

struct CellResult {
  CellSpec cell;
  int failed = 0;
  std::optional<eval::ExperimentSummary> summary;
  std::optional<eval::ExperimentSummary> baseline_summary;
};

struct RunResult {
  std::vector<CellResult> cells;
  int total_trials = 0;
  int failed_trials = 0;

  // 0 all trials succeeded, 3 every trial failed, 2 otherwise.
  int exit_code() const;
};

using ProgressFn = std::function<void(const TrialOutcome&)>;

// Runs the grid and writes, below config.output_dir:
//   manifest.json
//   <cell>/trial_<k>.json (or trial_<k>.error.json), optional trial_<k>.ckpt
//   <cell>/summary.json, <cell>/results.csv
//   <cell>/summary_continuous.json, <cell>/results_continuous.csv (baseline)
//   results.csv, results_continuous.csv
// Refuses to write into a directory that already holds a manifest, and
// never overwrites a file. Trials run on up to `workers` threads; writes go
// through one lock.
RunResult run_experiment(const ExperimentConfig& config, const ProgressFn& progress = {});

// The base corpus the grid starts from (loaded or synthesized, then split).
data::Corpus prepare_corpus(const ExperimentConfig& config);

}  // namespace canex::experiment
