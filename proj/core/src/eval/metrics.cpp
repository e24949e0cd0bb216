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

#include "canex/eval/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include <nlohmann/json.hpp>

#include "canex/error.hpp"
#include "canex/numerics/rng.hpp"

namespace canex::eval {

double hamming_distance_per_token(std::span<const std::string> truth, std::span<const std::string> guess) {
  if (truth.size() != guess.size()) throw ContractViolation("hdt: sequences differ in length");
  if (truth.empty()) throw ContractViolation("hdt: empty sequences");
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) mismatches += truth[i] != guess[i] ? 1 : 0;
  return static_cast<double>(mismatches) / static_cast<double>(truth.size());
}

Baseline random_baseline(int n, int v0_size) {
  if (n < 1) throw InvalidArgument("random_baseline: n must be >= 1");
  if (v0_size < 2) throw InvalidArgument("random_baseline: |V0| must be >= 2");
  const double p = 1.0 / static_cast<double>(v0_size);
  return {std::pow(p, n), 1.0 - p};
}

SimulatedBaseline simulate_random_guessing(int n, int v0_size, int trials, numerics::Rng& rng) {
  random_baseline(n, v0_size);  // argument checks
  if (trials < 2) throw InvalidArgument("simulate_random_guessing: need at least two trials");
  double acc_sum = 0.0, acc_sq = 0.0, hdt_sum = 0.0, hdt_sq = 0.0;
  const auto v = static_cast<std::uint64_t>(v0_size);
  for (int t = 0; t < trials; ++t) {
    int misses = 0;
    for (int i = 0; i < n; ++i) misses += rng.uniform_index(v) != rng.uniform_index(v) ? 1 : 0;
    const double hdt = static_cast<double>(misses) / n;
    const double acc = misses == 0 ? 1.0 : 0.0;
    acc_sum += acc;
    acc_sq += acc * acc;
    hdt_sum += hdt;
    hdt_sq += hdt * hdt;
  }
  const double m = trials;
  auto stderr_of = [m](double sum, double sq) {
    const double mean = sum / m;
    return std::sqrt(std::max(0.0, (sq / m - mean * mean) * m / (m - 1.0)) / m);
  };
  return {acc_sum / m, hdt_sum / m, stderr_of(acc_sum, acc_sq), stderr_of(hdt_sum, hdt_sq)};
}

TrialReport score_trial(CellKey cell, int trial, std::vector<std::string> truth, std::vector<std::string> guess) {
  TrialReport r;
  r.hdt = hamming_distance_per_token(truth, guess);
  r.exact_match = r.hdt == 0.0;
  r.cell = std::move(cell);
  r.trial = trial;
  r.truth = std::move(truth);
  r.guess = std::move(guess);
  return r;
}

namespace {

nlohmann::json cell_to_json(const CellKey& c) {
  return {{"pattern", c.pattern}, {"n", c.n},         {"R", c.repetitions},
          {"defenses", c.defenses}, {"method", c.method}, {"v0_size", c.v0_size}};
}

}  // namespace

nlohmann::json trial_to_json(const TrialReport& r, bool with_runtime) {
  nlohmann::json j = {{"cell", cell_to_json(r.cell)},
                      {"trial", r.trial},
                      {"truth", r.truth},
                      {"guess", r.guess},
                      {"exact_match", r.exact_match},
                      {"hdt", r.hdt},
                      {"seeds",
                       {{"trial", r.seed}, {"canary", r.canary_seed}, {"train", r.train_seed}, {"attack", r.attack_seed}}},
                      {"ties", r.ties},
                      {"final_loss", r.final_loss},
                      {"theta_hash_before", r.theta_hash_before},
                      {"theta_hash_after", r.theta_hash_after},
                      {"target_intent_accuracy", r.target_intent_accuracy},
                      {"target_tag_accuracy", r.target_tag_accuracy},
                      {"target_stopped_epoch", r.target_stopped_epoch},
                      {"target_best_epoch", r.target_best_epoch}};
  if (with_runtime) j["runtime_seconds"] = r.runtime_seconds;
  return j;
}

ExperimentSummary aggregate_trials(std::vector<TrialReport> reports) {
  if (reports.empty()) throw ContractViolation("aggregate_trials: no trials");
  ExperimentSummary s;
  s.cell = reports.front().cell;
  double acc = 0.0, hdt = 0.0, hdt_sq = 0.0;
  for (const auto& r : reports) {
    if (!(r.cell == s.cell)) throw ContractViolation("aggregate_trials: trials from different cells");
    acc += r.exact_match ? 1.0 : 0.0;
    hdt += r.hdt;
    hdt_sq += r.hdt * r.hdt;
  }
  const double m = static_cast<double>(reports.size());
  s.mean_accuracy = acc / m;
  s.mean_hdt = hdt / m;
  if (reports.size() > 1) {
    const double var = std::max(0.0, (hdt_sq / m - s.mean_hdt * s.mean_hdt) * m / (m - 1.0));
    s.hdt_stderr = std::sqrt(var / m);
  }
  s.baseline = random_baseline(s.cell.n, s.cell.v0_size);
  s.trials = std::move(reports);
  return s;
}

nlohmann::json summary_to_json(const ExperimentSummary& s) {
  nlohmann::json trials = nlohmann::json::array();
  for (const auto& t : s.trials) trials.push_back(trial_to_json(t, false));
  return {{"cell", cell_to_json(s.cell)},
          {"trials", trials},
          {"mean_accuracy", s.mean_accuracy},
          {"mean_hdt", s.mean_hdt},
          {"hdt_stderr", s.hdt_stderr},
          {"baseline_accuracy", s.baseline.accuracy},
          {"baseline_hdt", s.baseline.hdt}};
}

void write_csv_header(std::ostream& out) { out << "pattern,n,R,defenses,trial,exact_match,hdt,seed\n"; }

void write_csv_rows(std::ostream& out, std::span<const TrialReport> reports) {
  char hdt[32];
  for (const auto& r : reports) {
    std::snprintf(hdt, sizeof(hdt), "%.17g", r.hdt);
    out << r.cell.pattern << ',' << r.cell.n << ',' << r.cell.repetitions << ',' << r.cell.defenses << ','
        << r.trial << ',' << (r.exact_match ? 1 : 0) << ',' << hdt << ',' << r.seed << '\n';
  }
}

}  // namespace canex::eval
