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
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace canex::numerics {
class Rng;
}

namespace canex::eval {

// Fraction of positions where `guess` differs from `truth`. Throws
// ContractViolation on empty or unequal-length inputs.
double hamming_distance_per_token(std::span<const std::string> truth, std::span<const std::string> guess);

struct Baseline {
  double accuracy = 0.0;
  double hdt = 0.0;
};

// Expected scores of uniform guessing over V0: (1/|V0|)^n and 1 - 1/|V0|.
// Throws InvalidArgument when n < 1 or |V0| < 2.
Baseline random_baseline(int n, int v0_size);

struct SimulatedBaseline {
  double accuracy = 0.0;
  double hdt = 0.0;
  double accuracy_stderr = 0.0;
  double hdt_stderr = 0.0;
};

// Monte-Carlo estimate of the random baseline from `trials` draws.
SimulatedBaseline simulate_random_guessing(int n, int v0_size, int trials, numerics::Rng& rng);

// Coordinates shared by every trial of one experiment cell.
struct CellKey {
  std::string pattern;
  int n = 0;
  int repetitions = 0;
  std::string defenses;         // "none" or a "+"-joined subset of D, ES, CE
  std::string method = "softmax";  // or "continuous"
  int v0_size = 0;

  bool operator==(const CellKey&) const = default;
};

struct TrialReport {
  CellKey cell;
  int trial = 0;
  std::vector<std::string> truth;
  std::vector<std::string> guess;
  bool exact_match = false;
  double hdt = 0.0;
  std::uint64_t seed = 0;  // per-trial master seed
  std::uint64_t canary_seed = 0;
  std::uint64_t train_seed = 0;
  std::uint64_t attack_seed = 0;
  std::vector<int> ties;
  double final_loss = 0.0;
  std::string theta_hash_before;
  std::string theta_hash_after;
  double target_intent_accuracy = 0.0;
  double target_tag_accuracy = 0.0;
  int target_stopped_epoch = 0;
  int target_best_epoch = 0;
  double runtime_seconds = 0.0;  // kept out of summaries, which must be reproducible
};

// Fills exact_match and hdt from truth and guess.
TrialReport score_trial(CellKey cell, int trial, std::vector<std::string> truth, std::vector<std::string> guess);

// `with_runtime` adds the wall-clock field.
nlohmann::json trial_to_json(const TrialReport& r, bool with_runtime);

struct ExperimentSummary {
  CellKey cell;
  std::vector<TrialReport> trials;
  double mean_accuracy = 0.0;
  double mean_hdt = 0.0;
  double hdt_stderr = 0.0;
  Baseline baseline;
};

// Throws ContractViolation when `reports` is empty or mixes cells.
ExperimentSummary aggregate_trials(std::vector<TrialReport> reports);

nlohmann::json summary_to_json(const ExperimentSummary& s);

// Flat export: pattern,n,R,defenses,trial,exact_match,hdt,seed.
void write_csv_header(std::ostream& out);
void write_csv_rows(std::ostream& out, std::span<const TrialReport> reports);

}  // namespace canex::eval
