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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.
//
//   canex_acceptance [--work-dir DIR] [--only 1,4,...]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "canex/attack/attack.hpp"
#include "canex/eval/metrics.hpp"
#include "canex/experiment/runner.hpp"
#include "canex/nlu/crf.hpp"
#include "canex/nlu/model.hpp"
#include "canex/numerics/grad_check.hpp"
#include "canex/numerics/rng.hpp"

namespace {

namespace fs = std::filesystem;
using canex::numerics::Tensor;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// ---- 1: CRF against exhaustive enumeration --------------------------------

Verdict crf_oracle() {
  const auto start = Clock::now();
  canex::numerics::Rng rng(2024);
  double worst_nll = 0.0;
  int viterbi_mismatch = 0;
  for (int inst = 0; inst < 200; ++inst) {
    const int tags = 1 + static_cast<int>(rng.uniform_index(4));
    const int len = 1 + static_cast<int>(rng.uniform_index(4));
    Tensor e(tags, len), t(tags + 2, tags + 2);
    for (Eigen::Index i = 0; i < e.size(); ++i) e.data()[i] = rng.normal(0.0, 2.0);
    for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = rng.normal(0.0, 2.0);
    canex::nlu::mask_transitions(t, tags);
    std::vector<int> gold(static_cast<std::size_t>(len));
    for (auto& g : gold) g = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(tags)));

    int paths = 1;
    for (int i = 0; i < len; ++i) paths *= tags;
    std::vector<double> scores;
    double best = -std::numeric_limits<double>::infinity();
    std::vector<int> best_path;
    for (int code = 0; code < paths; ++code) {
      std::vector<int> p(static_cast<std::size_t>(len));
      for (int i = 0, c = code; i < len; ++i, c /= tags) p[static_cast<std::size_t>(i)] = c % tags;
      const double s = canex::nlu::crf_path_score(e, t, p);
      scores.push_back(s);
      if (s > best) best = s, best_path = p;
    }
    double m = best, acc = 0.0;
    for (double s : scores) acc += std::exp(s - m);
    const double brute_nll = m + std::log(acc) - canex::nlu::crf_path_score(e, t, gold);
    worst_nll = std::max(worst_nll, std::abs(brute_nll - canex::nlu::crf_negative_log_likelihood(e, t, gold)));
    if (canex::nlu::crf_viterbi_decode(e, t).tags != best_path) ++viterbi_mismatch;
  }
  const double secs = seconds_since(start);
  return {worst_nll <= 1e-10 && viterbi_mismatch == 0 && secs < 10.0,
          "200 instances, max |NLL - enumeration| " + fmt("%.2e", worst_nll) + ", Viterbi mismatches " +
              std::to_string(viterbi_mismatch) + ", " + fmt("%.2f", secs) + " s"};
}

// ---- 2 and 7: a tiny hand-built model ----------------------------------

canex::training::TrainedModel tiny_model(bool char_embeddings) {
  using canex::data::Vocabulary;
  std::vector<std::string> words = canex::data::digit_words();
  for (const char* w : {"my", "pin", "code", "is", "play", "jazz", "in", "paris", "set", "alarm", "for", "noon",
                        "book", "table", "rain", "weather", "today", "song", "by"}) {
    words.push_back(w);
  }
  canex::training::TrainedModel m;
  m.vocab = Vocabulary(words, true);
  if (m.vocab.size() != 30) throw std::logic_error("tiny vocabulary must have 30 entries");
  m.chars = canex::data::build_char_vocabulary(m.vocab.tokens());
  m.intents = canex::data::LabelSet({"PinIntent", "PlayMusic", "SetAlarm"});
  m.tags = canex::data::LabelSet({"O", "B-canary", "I-canary", "B-city"});
  m.config.vocab_size = static_cast<int>(m.vocab.size());
  m.config.char_vocab_size = static_cast<int>(m.chars.size());
  m.config.embedding_dim = 8;
  m.config.hidden_dim = 8;
  m.config.intent_count = 3;
  m.config.tag_count = 4;
  m.config.char_embeddings_enabled = char_embeddings;
  m.config.char_emb_dim = 4;
  m.config.char_filter_count = 5;
  canex::numerics::Rng rng(31);
  m.params = canex::nlu::init_params(m.config, rng);
  // Scale weights so gates and the CRF operate away from their linear region.
  for (auto& [name, t] : m.params.named()) {
    if (name == "transitions") continue;
    for (Eigen::Index i = 0; i < t->size(); ++i) t->data()[i] = rng.normal(0.0, 0.5);
  }
  auto& tr = m.params.transitions;
  for (Eigen::Index r = 0; r < tr.rows(); ++r) {
    for (Eigen::Index c = 0; c < tr.cols(); ++c) {
      if (std::isfinite(tr(r, c))) tr(r, c) = rng.normal(0.0, 0.5);
    }
  }
  m.rebuild_token_chars();
  return m;
}

canex::attack::AttackContext pin_context(const canex::training::TrainedModel& m, int n) {
  canex::attack::CanaryQuery q;
  q.prefix = canex::data::canary_prefix(canex::data::CanaryPattern::kPin);
  q.unknowns = n;
  q.intent = "PinIntent";
  q.tags = canex::data::canary_tags(q.prefix.size(), static_cast<std::size_t>(n));
  return canex::attack::AttackContext::make(
      m, q, canex::data::make_reduced_vocabulary(m.vocab, canex::data::digit_words()));
}

Verdict gradient_fidelity() {
  const auto start = Clock::now();
  double worst_theta = 0.0, worst_z = 0.0;
  for (bool ce : {false, true}) {
    const auto m = tiny_model(ce);
    const std::vector<std::string> sentence{"my", "pin", "code", "is", "seven", "one", "jazz"};
    const auto enc = m.encode({sentence, {"O", "O", "O", "O", "B-canary", "I-canary", "O"}, "PinIntent"});
    const auto theta = canex::numerics::gradient_check(
        [&](canex::numerics::Tape& tape, std::span<const canex::numerics::Var> leaves) {
          const auto b = canex::nlu::bind_flat(tape, leaves, m.config);
          std::vector<canex::nlu::InputSlot> slots;
          for (int t : enc.tokens) slots.push_back(canex::nlu::InputSlot::discrete(t));
          const auto x = canex::nlu::embed_tokens(b, m.config, slots, m.token_chars, nullptr, {});
          return canex::nlu::model_loss(b, m.config, x, enc.intent, enc.tags, {}).loss;
        },
        canex::nlu::flatten_params(m.params, m.config));
    worst_theta = std::max(worst_theta, theta.max_relative_error);

    const auto ctx = pin_context(m, 3);
    canex::numerics::Rng rng(5);
    Tensor z(3, 10);
    for (Eigen::Index i = 0; i < z.size(); ++i) z.data()[i] = rng.normal(0.0, 1.0);
    const auto zc = canex::numerics::gradient_check(
        [&](canex::numerics::Tape& tape, std::span<const canex::numerics::Var> leaves) {
          return canex::attack::attack_loss(tape, ctx, leaves[0], 0.5);
        },
        {z});
    worst_z = std::max(worst_z, zc.max_relative_error);
  }
  const double secs = seconds_since(start);
  return {worst_theta < 1e-4 && worst_z < 1e-4 && secs < 60.0,
          "d=8 hidden=8 |V|=30, with and without chars: max rel err theta " + fmt("%.2e", worst_theta) + ", Z " +
              fmt("%.2e", worst_z) + ", " + fmt("%.1f", secs) + " s"};
}

Verdict schedule_exactness() {
  const auto m = tiny_model(false);
  const auto ctx = pin_context(m, 2);
  canex::attack::AttackConfig cfg;
  canex::attack::AttackState state(canex::attack::init_logits(2, 10, cfg.init, 0), cfg);
  double worst_t = 0.0, worst_lr = 0.0;
  for (int t = 0; t < 250; ++t) {
    worst_t = std::max(worst_t, std::abs(state.temperature - 0.1 * std::pow(0.997, t)));
    worst_lr = std::max(worst_lr, std::abs(state.learning_rate - 6.5e-3 * std::pow(0.995, t)));
    canex::attack::attack_step(state, ctx, cfg);
  }
  const double t250 = state.temperature;
  worst_t = std::max(worst_t, std::abs(t250 - 0.1 * std::pow(0.997, 250)));
  worst_lr = std::max(worst_lr, std::abs(state.learning_rate - 6.5e-3 * std::pow(0.995, 250)));
  return {worst_t <= 1e-12 && worst_lr <= 1e-12 && std::abs(t250 - 0.0472) < 5e-5,
          "T_250 = " + fmt("%.6f", t250) + ", max |T_t - closed form| " + fmt("%.1e", worst_t) +
              ", max |lr_t - closed form| " + fmt("%.1e", worst_lr)};
}

// ---- 3: analytic baselines -------------------------------------------------

Verdict baseline_formulas() {
  const auto color = canex::eval::random_baseline(4, 12);
  const auto pin = canex::eval::random_baseline(4, 10);
  bool ok = std::abs(color.accuracy - 4.82e-5) <= 0.005e-5 && std::abs(color.hdt - 0.92) <= 0.005 &&
            pin.accuracy == std::pow(0.1, 4) && std::abs(pin.accuracy - 1e-4) < 1e-18 && pin.hdt == 0.9;
  std::string mc;
  for (const auto& [n, v] : std::vector<std::pair<int, int>>{{4, 10}, {4, 12}, {1, 2}}) {
    canex::numerics::Rng rng(static_cast<std::uint64_t>(n * 100 + v));
    const auto sim = canex::eval::simulate_random_guessing(n, v, 100000, rng);
    const auto exact = canex::eval::random_baseline(n, v);
    const double z_hdt = std::abs(sim.hdt - exact.hdt) / sim.hdt_stderr;
    const double z_acc = sim.accuracy_stderr > 0 ? std::abs(sim.accuracy - exact.accuracy) / sim.accuracy_stderr
                                                 : (sim.accuracy == exact.accuracy ? 0.0 : 1e9);
    ok = ok && z_hdt < 3.0 && z_acc < 3.0;
    mc += " (" + std::to_string(n) + "," + std::to_string(v) + "): z_hdt " + fmt("%.2f", z_hdt) + " z_acc " +
          fmt("%.2f", z_acc);
  }
  return {ok, "color n=4: Acc " + fmt("%.3e", color.accuracy) + " HDT " + fmt("%.4f", color.hdt) +
                  "; pin n=4: Acc " + fmt("%.1e", pin.accuracy) + " HDT " + fmt("%.2f", pin.hdt) +
                  "; Monte-Carlo 1e5 draws" + mc};
}

// ---- 4, 5, 6, 8, 9: end-to-end sweeps ---------------------------------

canex::experiment::ExperimentConfig cell_config(const fs::path& out, bool defended) {
  canex::experiment::ExperimentConfig c;
  c.corpus.synth_size = 2000;
  c.corpus.synth_seed = 7;
  c.corpus.val_fraction = 0.1;
  c.patterns = {canex::data::CanaryPattern::kPin};
  c.n_values = {4};
  c.r_values = {100};
  c.trials = 10;
  c.defenses = {defended ? canex::experiment::DefenseSet{true, true, true} : canex::experiment::DefenseSet{}};
  // Default widths. A short run at a high rate memorizes the canary without
  // driving its loss to ~1e-9, where the relaxed landscape goes flat and the
  // attack stops ordering digits correctly.
  c.model.embedding_dim = 50;
  c.model.hidden_dim = 64;
  c.train.max_epochs = 5;
  c.train.learning_rate = 1e-2;
  c.continuous_baseline = !defended;
  c.output_dir = out;
  c.master_seed = 20240601;
  c.workers = 1;
  return c;
}

struct SweepRun {
  canex::experiment::RunResult result;
  double seconds = 0.0;
  std::string error;
};

SweepRun run_sweep(const canex::experiment::ExperimentConfig& c) {
  SweepRun r;
  fs::remove_all(c.output_dir);
  const auto start = Clock::now();
  try {
    r.result = canex::experiment::run_experiment(c, [](const canex::experiment::TrialOutcome& o) {
      std::fprintf(stderr, "  %s trial %d: %s\n", o.cell.slug().c_str(), o.trial,
                   o.ok ? ("hdt " + fmt("%.2f", o.attack.hdt) + (o.baseline ? " continuous hdt " + fmt("%.2f", o.baseline->hdt) : std::string()) +
                           " (" + fmt("%.1f", o.attack.runtime_seconds) + " s)")
                              .c_str()
                        : o.error.c_str());
    });
  } catch (const std::exception& ex) {
    r.error = ex.what();
  }
  r.seconds = seconds_since(start);
  return r;
}

double mean_target_accuracy(const canex::eval::ExperimentSummary& s) {
  double sum = 0.0;
  for (const auto& t : s.trials) sum += t.target_intent_accuracy;
  return sum / static_cast<double>(s.trials.size());
}

bool hashes_frozen(const fs::path& summary) {
  if (!fs::exists(summary)) return false;
  const auto j = nlohmann::json::parse(slurp(summary));
  for (const auto& t : j.at("trials")) {
    if (t.at("theta_hash_before") != t.at("theta_hash_after") || t.at("theta_hash_before").get<std::string>().empty()) {
      return false;
    }
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  fs::path work = fs::temp_directory_path() / "canex_acceptance";
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--work-dir" && i + 1 < argc) {
      work = argv[++i];
    } else if (a == "--only" && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      for (std::string k; std::getline(ss, k, ',');) only.insert(std::stoi(k));
    } else {
      std::fprintf(stderr, "usage: %s [--work-dir DIR] [--only 1,2,...]\n", argv[0]);
      return 2;
    }
  }
  auto wanted = [&](int k) { return only.empty() || only.count(k) > 0; };
  fs::create_directories(work);

  int failures = 0;
  auto report = [&](int k, const char* title, const Verdict& v) {
    std::printf("CRITERION %d %s: %s | %s\n", k, title, v.pass ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
    failures += v.pass ? 0 : 1;
  };

  if (wanted(1)) report(1, "crf-oracle", crf_oracle());
  if (wanted(2)) report(2, "gradient-fidelity", gradient_fidelity());
  if (wanted(3)) report(3, "baseline-formulas", baseline_formulas());

  const bool sweeps = wanted(4) || wanted(5) || wanted(6) || wanted(8) || wanted(9);
  SweepRun plain, defended;
  const auto plain_cfg = cell_config(work / "undefended", false);
  const auto defended_cfg = cell_config(work / "defended", true);
  const std::string cell_dir = "pin_n4_R100_none";
  if (sweeps) plain = run_sweep(plain_cfg);
  const auto* plain_cell = plain.result.cells.empty() ? nullptr : &plain.result.cells.front();

  if (wanted(4)) {
    Verdict v;
    if (!plain_cell || !plain_cell->summary) {
      v.detail = "sweep failed: " + plain.error;
    } else {
      const auto& s = *plain_cell->summary;
      v.pass = plain_cell->failed == 0 && s.trials.size() == 10 && s.mean_hdt <= 0.6 && s.mean_accuracy >= 0.1 &&
               plain.seconds < 1800.0;
      v.detail = "pin n=4 R=100 no defenses, 10 trials: mean HDT " + fmt("%.3f", s.mean_hdt) + " (<= 0.6; baseline 0.90), mean Acc " +
                 fmt("%.2f", s.mean_accuracy) + " (>= 0.1; baseline 1e-4), sweep " + fmt("%.0f", plain.seconds) + " s";
    }
    report(4, "attack-beats-chance", v);
  }
  if (wanted(5)) {
    Verdict v;
    if (!plain_cell || !plain_cell->baseline_summary) {
      v.detail = "no continuous-baseline summary: " + plain.error;
    } else {
      const auto& s = *plain_cell->baseline_summary;
      v.pass = s.trials.size() == 10 && std::abs(s.mean_hdt - 0.9) <= 0.1;
      v.detail = "continuous attack on the same 10 models: mean HDT " + fmt("%.3f", s.mean_hdt) + " (|. - 0.90| <= 0.1), mean Acc " +
                 fmt("%.2f", s.mean_accuracy);
    }
    report(5, "continuous-baseline-at-chance", v);
  }
  if (wanted(6) || wanted(8)) defended = run_sweep(defended_cfg);
  if (wanted(6)) {
    Verdict v;
    const auto* cell = defended.result.cells.empty() ? nullptr : &defended.result.cells.front();
    if (!cell || !cell->summary || !plain_cell || !plain_cell->summary) {
      v.detail = "sweep failed: " + defended.error + plain.error;
    } else {
      const auto& s = *cell->summary;
      const double drop = mean_target_accuracy(*plain_cell->summary) - mean_target_accuracy(s);
      v.pass = cell->failed == 0 && s.trials.size() == 10 && s.mean_accuracy == 0.0 && s.mean_hdt >= 0.8 && drop < 0.05;
      v.detail = "D+ES+CE: mean Acc " + fmt("%.2f", s.mean_accuracy) + " (= 0), mean HDT " + fmt("%.3f", s.mean_hdt) +
                 " (>= 0.80); val intent accuracy " + fmt("%.4f", mean_target_accuracy(s)) + " vs undefended " +
                 fmt("%.4f", mean_target_accuracy(*plain_cell->summary)) + " (drop " + fmt("%.2f", 100 * drop) + " pp < 5)";
    }
    report(6, "defense-efficacy", v);
  }
  if (wanted(7)) report(7, "schedule-exactness", schedule_exactness());
  if (wanted(8)) {
    const auto a = plain_cfg.output_dir / cell_dir;
    const auto b = defended_cfg.output_dir / "pin_n4_R100_D+ES+CE";
    const bool ok = hashes_frozen(a / "summary.json") && hashes_frozen(a / "summary_continuous.json") &&
                    hashes_frozen(b / "summary.json");
    report(8, "frozen-theta", {ok, "parameter SHA-256 identical before and after every attack in the undefended, continuous and defended runs"});
  }
  if (wanted(9)) {
    auto again = plain_cfg;
    again.output_dir = work / "undefended_rerun";
    const auto rerun = run_sweep(again);
    bool same = rerun.error.empty();
    std::string detail;
    for (const char* f : {"summary.json", "summary_continuous.json", "results.csv"}) {
      const auto x = slurp(plain_cfg.output_dir / cell_dir / f);
      const auto y = slurp(again.output_dir / cell_dir / f);
      const bool eq = !x.empty() && x == y;
      same = same && eq;
      detail += std::string(f) + (eq ? " identical; " : " DIFFERS; ");
    }
    report(9, "determinism", {same, detail + "rerun " + fmt("%.0f", rerun.seconds) + " s"});
  }
  std::printf("%s\n", failures == 0 ? "ALL CRITERIA PASSED" : (std::to_string(failures) + " CRITERIA FAILED").c_str());
  return failures == 0 ? 0 : 1;
}
