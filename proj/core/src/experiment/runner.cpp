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

#include "canex/experiment/runner.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "canex/data/corpus_io.hpp"
#include "canex/data/synth.hpp"
#include "canex/error.hpp"
#include "canex/numerics/hash.hpp"
#include "canex/training/checkpoint.hpp"
#include "canex/version.hpp"

namespace canex::experiment {

namespace fs = std::filesystem;

std::string CellSpec::slug() const {
  return data::to_string(pattern) + "_n" + std::to_string(n) + "_R" + std::to_string(repetitions) + "_" +
         defenses.name();
}

std::vector<CellSpec> expand_grid(const ExperimentConfig& config) {
  std::vector<CellSpec> cells;
  for (auto p : config.patterns) {
    for (int n : config.n_values) {
      for (int r : config.r_values) {
        for (const auto& d : config.defenses) cells.push_back({p, n, r, d});
      }
    }
  }
  return cells;
}

std::uint64_t trial_seed(std::uint64_t master_seed, const CellSpec& cell, int trial) {
  return numerics::seed_from({std::to_string(master_seed), data::to_string(cell.pattern), std::to_string(cell.n),
                              std::to_string(cell.repetitions), cell.defenses.name(), std::to_string(trial)});
}

namespace {

std::uint64_t sub_seed(std::uint64_t seed, std::string_view purpose) {
  return numerics::seed_from({std::to_string(seed), purpose});
}

// Creates `path` exclusively; an existing file is an error.
void write_new_file(const fs::path& path, std::string_view content) {
  std::FILE* f = std::fopen(path.c_str(), "wx");
  if (f == nullptr) throw Error("refusing to overwrite or unable to create " + path.string());
  const bool ok = std::fwrite(content.data(), 1, content.size(), f) == content.size();
  if (std::fclose(f) != 0 || !ok) throw Error("failed writing " + path.string());
}

std::string bytes_to_string(const std::vector<std::uint8_t>& bytes) {
  return {reinterpret_cast<const char*>(bytes.data()), bytes.size()};
}

eval::CellKey cell_key(const CellSpec& cell, std::string method, int v0_size) {
  return {data::to_string(cell.pattern), cell.n, cell.repetitions, cell.defenses.name(), std::move(method), v0_size};
}

}  // namespace

data::Corpus prepare_corpus(const ExperimentConfig& config) {
  std::vector<data::LabeledExample> examples;
  if (config.corpus.path) {
    examples = data::load_corpus(*config.corpus.path).examples;
  } else {
    data::SynthConfig synth = data::SynthConfig::defaults();
    synth.size = config.corpus.synth_size;
    synth.seed = config.corpus.synth_seed;
    synth.rare_rate = config.corpus.synth_rare_rate;
    examples = data::synth_corpus(synth);
  }
  return data::split_train_val(std::move(examples), config.corpus.val_fraction,
                               sub_seed(config.master_seed, "corpus-split"));
}

TrialOutcome run_trial(const ExperimentConfig& config, const data::Corpus& base, const CellSpec& cell, int trial,
                       const nlu::PretrainedEmbeddings* pretrained) {
  const auto start = std::chrono::steady_clock::now();
  TrialOutcome out;
  out.cell = cell;
  out.trial = trial;

  const std::uint64_t seed = trial_seed(config.master_seed, cell, trial);
  const std::uint64_t canary_seed = sub_seed(seed, "canary");
  const std::uint64_t train_seed = sub_seed(seed, "train");
  const std::uint64_t attack_seed = sub_seed(seed, "attack");

  const data::CanarySpec canary =
      data::generate_canary(cell.pattern, cell.n, canary_seed, cell.repetitions, config.digit_style);
  const data::Corpus corpus = data::inject_canary(base, canary);

  nlu::ModelConfig model_cfg = config.model;
  model_cfg.char_embeddings_enabled = cell.defenses.char_embeddings;
  training::TrainConfig train_cfg = config.train;
  train_cfg.dropout_enabled = cell.defenses.dropout;
  train_cfg.early_stopping_enabled = cell.defenses.early_stopping;
  train_cfg.shuffle_seed = sub_seed(seed, "shuffle");

  training::TrainExtras extras;
  extras.pretrained = pretrained;
  extras.extra_tokens = training::default_extra_tokens();
  if (config.digit_style == data::DigitStyle::kNumerals) {
    const auto& numerals = data::digit_numerals();
    extras.extra_tokens.insert(extras.extra_tokens.end(), numerals.begin(), numerals.end());
  }
  const training::TrainResult trained = training::train(corpus, model_cfg, train_cfg, train_seed, extras);
  const training::TrainedModel& model = trained.model;

  data::ReducedVocabulary v0 =
      config.attack.full_vocabulary
          ? data::full_reduced_vocabulary(model.vocab)
          : data::make_reduced_vocabulary(model.vocab, data::candidate_tokens(cell.pattern, config.digit_style));
  const int v0_size = static_cast<int>(v0.size());

  const std::string hash_before = nlu::params_hash(model.params);
  const attack::AttackContext ctx =
      attack::AttackContext::make(model, attack::CanaryQuery::from_spec(canary), std::move(v0));
  attack::AttackConfig attack_cfg = config.attack;
  attack_cfg.seed = attack_seed;
  const attack::ReconstructionResult rec = attack::run_attack(ctx, attack_cfg);
  std::optional<attack::ReconstructionResult> base_rec;
  if (config.continuous_baseline) base_rec = attack::continuous_baseline_attack(ctx, attack_cfg);
  const std::string hash_after = nlu::params_hash(model.params);
  if (hash_before != hash_after) throw ContractViolation("attack modified the frozen model parameters");

  auto fill = [&](eval::TrialReport& r, const attack::ReconstructionResult& res) {
    r.seed = seed;
    r.canary_seed = canary_seed;
    r.train_seed = train_seed;
    r.attack_seed = attack_seed;
    r.ties = res.ties;
    r.final_loss = res.final_loss;
    r.theta_hash_before = hash_before;
    r.theta_hash_after = hash_after;
    r.target_intent_accuracy = trained.report.val_quality.intent_accuracy;
    r.target_tag_accuracy = trained.report.val_quality.tag_accuracy;
    r.target_stopped_epoch = trained.report.stopped_epoch;
    r.target_best_epoch = trained.report.best_epoch;
  };
  out.attack = eval::score_trial(cell_key(cell, "softmax", v0_size), trial, canary.unknowns, rec.tokens);
  fill(out.attack, rec);
  if (base_rec) {
    out.baseline = eval::score_trial(cell_key(cell, "continuous", v0_size), trial, canary.unknowns, base_rec->tokens);
    fill(*out.baseline, *base_rec);
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.attack.runtime_seconds = seconds;
  if (out.baseline) out.baseline->runtime_seconds = seconds;
  out.ok = true;

  if (config.save_checkpoints) {
    const fs::path dir = config.output_dir / cell.slug();
    const nlohmann::json meta = {
        {"cell", cell.slug()},
        {"trial", trial},
        {"seed", seed},
        {"canary",
         {{"pattern", data::to_string(cell.pattern)}, {"prefix", canary.prefix}, {"unknowns", canary.unknowns},
          {"intent", canary.intent}, {"tags", canary.tags}, {"repetitions", canary.repetitions}}}};
    write_new_file(dir / ("trial_" + std::to_string(trial) + ".ckpt"),
                   bytes_to_string(training::serialize_checkpoint(model, meta)));
  }
  return out;
}

int RunResult::exit_code() const {
  if (failed_trials == 0) return 0;
  return failed_trials == total_trials ? 3 : 2;
}

RunResult run_experiment(const ExperimentConfig& config, const ProgressFn& progress) {
  config.validate();
  const fs::path root = config.output_dir;
  if (fs::exists(root / "manifest.json")) {
    throw Error("output directory " + root.string() + " already holds an experiment; refusing to overwrite");
  }
  const auto cells = expand_grid(config);
  fs::create_directories(root);
  for (const auto& c : cells) fs::create_directories(root / c.slug());

  const int workers = resolve_workers(config.workers);
  {
    nlohmann::json manifest = {{"tool", "canex"},
                               {"version", kVersion},
                               {"schema_version", config.schema_version},
                               {"config", to_json(config)},
                               {"config_hash", config_hash(config)},
                               {"master_seed", config.master_seed},
                               {"workers", workers}};
    nlohmann::json cell_list = nlohmann::json::array();
    for (const auto& c : cells) {
      nlohmann::json seeds = nlohmann::json::array();
      for (int t = 0; t < config.trials; ++t) seeds.push_back(trial_seed(config.master_seed, c, t));
      cell_list.push_back({{"dir", c.slug()}, {"trial_seeds", seeds}});
    }
    manifest["cells"] = cell_list;
    write_new_file(root / "manifest.json", manifest.dump(2) + "\n");
  }

  const data::Corpus base = prepare_corpus(config);
  std::optional<nlu::PretrainedEmbeddings> pretrained;
  if (config.embeddings_path) pretrained = nlu::load_embedding_text(*config.embeddings_path);

  struct Job {
    std::size_t cell;
    int trial;
  };
  std::vector<Job> jobs;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (int t = 0; t < config.trials; ++t) jobs.push_back({c, t});
  }
  std::vector<TrialOutcome> outcomes(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex write_lock;

  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      const CellSpec& cell = cells[jobs[j].cell];
      const int trial = jobs[j].trial;
      TrialOutcome o;
      try {
        o = run_trial(config, base, cell, trial, pretrained ? &*pretrained : nullptr);
      } catch (const std::exception& ex) {
        o = TrialOutcome{};
        o.cell = cell;
        o.trial = trial;
        o.error = ex.what();
      }
      std::lock_guard lock(write_lock);
      const fs::path dir = root / cell.slug();
      const std::string stem = "trial_" + std::to_string(trial);
      try {
        if (o.ok) {
          nlohmann::json j = eval::trial_to_json(o.attack, true);
          if (o.baseline) j["continuous_baseline"] = eval::trial_to_json(*o.baseline, true);
          write_new_file(dir / (stem + ".json"), j.dump(2) + "\n");
        } else {
          const nlohmann::json j = {{"cell", cell.slug()},
                                    {"trial", trial},
                                    {"seed", trial_seed(config.master_seed, cell, trial)},
                                    {"error", o.error}};
          write_new_file(dir / (stem + ".error.json"), j.dump(2) + "\n");
        }
      } catch (const std::exception& ex) {
        o.ok = false;
        o.error = ex.what();
      }
      if (progress) progress(o);
      outcomes[j] = std::move(o);
    }
  };
  std::vector<std::thread> pool;
  const int threads = std::min<int>(workers, static_cast<int>(jobs.size()));
  for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  RunResult result;
  result.total_trials = static_cast<int>(jobs.size());
  std::ostringstream all_csv, all_base_csv;
  eval::write_csv_header(all_csv);
  eval::write_csv_header(all_base_csv);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    CellResult cr;
    cr.cell = cells[c];
    std::vector<eval::TrialReport> reports, base_reports;
    for (std::size_t j = 0; j < jobs.size(); ++j) {
      if (jobs[j].cell != c) continue;
      if (!outcomes[j].ok) {
        ++cr.failed;
        continue;
      }
      reports.push_back(outcomes[j].attack);
      if (outcomes[j].baseline) base_reports.push_back(*outcomes[j].baseline);
    }
    result.failed_trials += cr.failed;
    const fs::path dir = root / cells[c].slug();
    auto emit = [&](std::vector<eval::TrialReport> rs, const std::string& suffix, std::ostringstream& global,
                    std::optional<eval::ExperimentSummary>& slot) {
      if (rs.empty()) return;
      eval::write_csv_rows(global, rs);
      slot = eval::aggregate_trials(std::move(rs));
      std::ostringstream csv;
      eval::write_csv_header(csv);
      eval::write_csv_rows(csv, slot->trials);
      write_new_file(dir / ("summary" + suffix + ".json"), eval::summary_to_json(*slot).dump(2) + "\n");
      write_new_file(dir / ("results" + suffix + ".csv"), csv.str());
    };
    emit(std::move(reports), "", all_csv, cr.summary);
    emit(std::move(base_reports), "_continuous", all_base_csv, cr.baseline_summary);
    result.cells.push_back(std::move(cr));
  }
  write_new_file(root / "results.csv", all_csv.str());
  if (config.continuous_baseline) write_new_file(root / "results_continuous.csv", all_base_csv.str());
  return result;
}

}  // namespace canex::experiment
