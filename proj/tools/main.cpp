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

// canex: synthesize corpora, train target taggers, run canary extraction
// attacks and sweep experiment grids.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "canex/attack/attack.hpp"
#include "canex/data/canary.hpp"
#include "canex/data/corpus_io.hpp"
#include "canex/data/synth.hpp"
#include "canex/error.hpp"
#include "canex/eval/metrics.hpp"
#include "canex/experiment/runner.hpp"
#include "canex/numerics/rng.hpp"
#include "canex/training/checkpoint.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFailure = 3;

std::vector<std::string> split_words(const std::string& text, char sep = ' ') {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string w;
  while (std::getline(ss, w, sep)) {
    if (!w.empty()) out.push_back(w);
  }
  return out;
}

struct SynthArgs {
  std::size_t size = 2000;
  std::uint64_t seed = 7;
  double rare_rate = 0.02;
  std::string out;
};

int cmd_synth(const SynthArgs& a) {
  auto cfg = canex::data::SynthConfig::defaults();
  cfg.size = a.size;
  cfg.seed = a.seed;
  cfg.rare_rate = a.rare_rate;
  const auto examples = canex::data::synth_corpus(cfg);
  if (a.out.empty()) {
    canex::data::write_corpus(std::cout, examples);
  } else {
    canex::data::save_corpus(a.out, examples);
    std::cerr << "wrote " << examples.size() << " examples to " << a.out << "\n";
  }
  return kExitOk;
}

struct TrainArgs {
  std::string corpus;
  std::size_t synth_size = 2000;
  double val_fraction = 0.1;
  std::uint64_t split_seed = 0;
  std::string pattern;
  int n = 4;
  int repetitions = 100;
  std::uint64_t canary_seed = 0;
  std::string digit_style = "words";
  std::string embeddings;
  canex::nlu::ModelConfig model;
  canex::training::TrainConfig train;
  std::uint64_t seed = 0;
  std::string out;
};

canex::data::DigitStyle parse_style(const std::string& s) {
  if (s == "words") return canex::data::DigitStyle::kWords;
  if (s == "numerals") return canex::data::DigitStyle::kNumerals;
  throw canex::InvalidArgument("digit style must be words or numerals");
}

int cmd_train(const TrainArgs& a) {
  std::vector<canex::data::LabeledExample> examples;
  if (a.corpus.empty()) {
    auto cfg = canex::data::SynthConfig::defaults();
    cfg.size = a.synth_size;
    examples = canex::data::synth_corpus(cfg);
  } else {
    examples = canex::data::load_corpus(a.corpus).examples;
  }
  canex::data::Corpus corpus = canex::data::split_train_val(std::move(examples), a.val_fraction, a.split_seed);
  json meta = json::object();
  const auto style = parse_style(a.digit_style);
  if (!a.pattern.empty()) {
    const auto spec =
        canex::data::generate_canary(canex::data::parse_pattern(a.pattern), a.n, a.canary_seed, a.repetitions, style);
    corpus = canex::data::inject_canary(std::move(corpus), spec);
    meta["canary"] = {{"pattern", a.pattern}, {"prefix", spec.prefix}, {"unknowns", spec.unknowns},
                      {"intent", spec.intent}, {"tags", spec.tags},    {"repetitions", spec.repetitions}};
  }
  canex::training::TrainExtras extras;
  extras.extra_tokens = canex::training::default_extra_tokens();
  if (style == canex::data::DigitStyle::kNumerals) {
    const auto& nums = canex::data::digit_numerals();
    extras.extra_tokens.insert(extras.extra_tokens.end(), nums.begin(), nums.end());
  }
  std::optional<canex::nlu::PretrainedEmbeddings> pretrained;
  if (!a.embeddings.empty()) {
    pretrained = canex::nlu::load_embedding_text(a.embeddings);
    extras.pretrained = &*pretrained;
  }
  extras.on_epoch = [](const canex::training::EpochRecord& r) {
    std::fprintf(stderr, "epoch %d train_loss %.6f val_loss %.6f\n", r.epoch, r.train_loss, r.val_loss);
  };
  const auto result = canex::training::train(corpus, a.model, a.train, a.seed, extras);
  meta["train_config"] = a.train;
  meta["seed"] = a.seed;
  if (!a.out.empty()) canex::training::save_checkpoint(a.out, result.model, meta);
  json report = result.report;
  report["parameter_hash"] = canex::nlu::params_hash(result.model.params);
  std::cout << report.dump(2) << "\n";
  return kExitOk;
}

struct AttackArgs {
  std::string checkpoint;
  std::string pattern = "pin";
  int n = 4;
  std::string prefix;
  std::string v0 = "auto";
  std::string intent;
  std::string tags;
  std::string method = "softmax";
  std::string truth;
  canex::attack::AttackConfig config;
  std::string init = "zeros";
};

canex::data::ReducedVocabulary resolve_v0(const std::string& spec, canex::data::CanaryPattern pattern,
                                          const canex::data::Vocabulary& vocab) {
  using namespace canex::data;
  if (spec == "all") return full_reduced_vocabulary(vocab);
  if (spec == "auto") return make_reduced_vocabulary(vocab, candidate_tokens(pattern, DigitStyle::kWords));
  if (spec == "digits") return make_reduced_vocabulary(vocab, digit_words());
  if (spec == "numerals") return make_reduced_vocabulary(vocab, digit_numerals());
  if (spec == "colors") return make_reduced_vocabulary(vocab, color_names());
  return make_reduced_vocabulary(vocab, split_words(spec, ','));
}

int cmd_attack(AttackArgs a) {
  const auto ck = canex::training::load_checkpoint(a.checkpoint);
  const auto pattern = canex::data::parse_pattern(a.pattern);
  canex::attack::CanaryQuery q;
  q.prefix = a.prefix.empty() ? canex::data::canary_prefix(pattern) : split_words(a.prefix);
  q.unknowns = a.n;
  q.intent = a.intent.empty() ? canex::data::canary_intent(pattern) : a.intent;
  q.tags = a.tags.empty() ? canex::data::canary_tags(q.prefix.size(), static_cast<std::size_t>(a.n)) : split_words(a.tags);
  a.config.init = canex::attack::parse_init_scheme(a.init);

  const std::string before = canex::nlu::params_hash(ck.model.params);
  const auto ctx = canex::attack::AttackContext::make(ck.model, q, resolve_v0(a.v0, pattern, ck.model.vocab));
  canex::attack::ReconstructionResult r;
  if (a.method == "softmax") {
    r = canex::attack::run_attack(ctx, a.config);
  } else if (a.method == "continuous") {
    r = canex::attack::continuous_baseline_attack(ctx, a.config);
  } else {
    throw canex::InvalidArgument("method must be softmax or continuous");
  }
  json out = r;
  out["parameter_hash_before"] = before;
  out["parameter_hash_after"] = canex::nlu::params_hash(ck.model.params);
  out["v0"] = ctx.v0.tokens;
  if (!a.truth.empty()) {
    const auto truth = split_words(a.truth);
    out["hdt"] = canex::eval::hamming_distance_per_token(truth, r.tokens);
    out["exact_match"] = truth == r.tokens;
  }
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

struct EvalArgs {
  std::string truth;
  std::string guess;
  int n = 0;
  int v0_size = 0;
  int simulate = 0;
  std::uint64_t seed = 0;
};

int cmd_eval(const EvalArgs& a) {
  json out = json::object();
  if (!a.truth.empty() || !a.guess.empty()) {
    const auto t = split_words(a.truth);
    const auto g = split_words(a.guess);
    out["hdt"] = canex::eval::hamming_distance_per_token(t, g);
    out["exact_match"] = t == g;
  }
  if (a.n > 0 || a.v0_size > 0) {
    const auto b = canex::eval::random_baseline(a.n, a.v0_size);
    out["baseline"] = {{"accuracy", b.accuracy}, {"hdt", b.hdt}};
    if (a.simulate > 0) {
      canex::numerics::Rng rng(a.seed);
      const auto s = canex::eval::simulate_random_guessing(a.n, a.v0_size, a.simulate, rng);
      out["simulated"] = {{"accuracy", s.accuracy}, {"accuracy_stderr", s.accuracy_stderr},
                          {"hdt", s.hdt},           {"hdt_stderr", s.hdt_stderr}};
    }
  }
  if (out.empty()) throw canex::InvalidArgument("eval needs --truth/--guess or --n/--v0-size");
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

struct SweepArgs {
  std::string config;
  std::string output_dir;
  int workers = 0;
};

int cmd_sweep(const SweepArgs& a) {
  auto cfg = canex::experiment::load_config(a.config);
  if (!a.output_dir.empty()) cfg.output_dir = a.output_dir;
  if (a.workers > 0) cfg.workers = a.workers;
  const auto result = canex::experiment::run_experiment(cfg, [](const canex::experiment::TrialOutcome& o) {
    if (o.ok) {
      std::fprintf(stderr, "%s trial %d: hdt %.3f exact %d (%.1fs)\n", o.cell.slug().c_str(), o.trial,
                   o.attack.hdt, o.attack.exact_match ? 1 : 0, o.attack.runtime_seconds);
    } else {
      std::fprintf(stderr, "%s trial %d FAILED: %s\n", o.cell.slug().c_str(), o.trial, o.error.c_str());
    }
  });
  json cells = json::array();
  for (const auto& c : result.cells) {
    json cj = {{"cell", c.cell.slug()}, {"failed_trials", c.failed}};
    if (c.summary) cj["mean_accuracy"] = c.summary->mean_accuracy, cj["mean_hdt"] = c.summary->mean_hdt;
    if (c.baseline_summary) cj["continuous_mean_hdt"] = c.baseline_summary->mean_hdt;
    cells.push_back(cj);
  }
  std::cout << json{{"cells", cells}, {"total_trials", result.total_trials}, {"failed_trials", result.failed_trials}}
                   .dump(2)
            << "\n";
  return result.exit_code();
}

int cmd_inspect(const std::string& path) {
  const auto ck = canex::training::load_checkpoint(path);
  json shapes = json::object();
  for (const auto& [name, t] : ck.model.params.named()) shapes[name] = {t->rows(), t->cols()};
  const json out = {{"model_config", ck.model.config},
                    {"vocab_size", ck.model.vocab.size()},
                    {"char_vocab_size", ck.model.chars.size()},
                    {"intents", ck.model.intents.labels()},
                    {"tags", ck.model.tags.labels()},
                    {"parameter_shapes", shapes},
                    {"parameter_hash", canex::nlu::params_hash(ck.model.params)},
                    {"metadata", ck.metadata}};
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"canex: canary extraction experiments on a joint intent/NER tagger"};
  app.require_subcommand(1);
  int exit_code = kExitOk;
  std::function<int()> action;

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Write a synthetic JSON-lines corpus");
  s->add_option("--size", synth.size, "Number of utterances");
  s->add_option("--seed", synth.seed, "Generator seed");
  s->add_option("--rare-rate", synth.rare_rate, "Share of utterances drawn from rare templates");
  s->add_option("--out", synth.out, "Output path (stdout when omitted)");
  s->callback([&] { action = [&] { return cmd_synth(synth); }; });

  TrainArgs train;
  auto* t = app.add_subcommand("train", "Train a target model and write a checkpoint");
  t->add_option("--corpus", train.corpus, "JSON-lines corpus (synthetic when omitted)");
  t->add_option("--synth-size", train.synth_size, "Synthetic corpus size");
  t->add_option("--val-fraction", train.val_fraction, "Validation share of the corpus");
  t->add_option("--split-seed", train.split_seed, "Train/val split seed");
  t->add_option("--pattern", train.pattern, "Inject a canary of this pattern (call, pin, color)");
  t->add_option("--n", train.n, "Unknown tokens in the canary");
  t->add_option("--repetitions", train.repetitions, "Canary copies R");
  t->add_option("--canary-seed", train.canary_seed, "Canary sampling seed");
  t->add_option("--digit-style", train.digit_style, "words or numerals");
  t->add_option("--embeddings", train.embeddings, "Pretrained embeddings in text format");
  t->add_option("--embedding-dim", train.model.embedding_dim, "Word embedding width");
  t->add_option("--hidden", train.model.hidden_dim, "LSTM hidden size per direction");
  t->add_flag("--char-embeddings", train.model.char_embeddings_enabled, "Enable the char-CNN (CE defense)");
  t->add_flag("--dropout", train.train.dropout_enabled, "Enable dropout (D defense)");
  t->add_flag("--early-stopping", train.train.early_stopping_enabled, "Enable early stopping (ES defense)");
  t->add_flag("--freeze-embeddings{false}", train.train.train_embeddings, "Keep word embeddings at their initial values");
  t->add_option("--patience", train.train.patience, "Early stopping patience");
  t->add_option("--epochs", train.train.max_epochs, "Maximum epochs");
  t->add_option("--lr", train.train.learning_rate, "Adam learning rate");
  t->add_option("--batch-size", train.train.batch_size, "Examples per update");
  t->add_option("--shuffle-seed", train.train.shuffle_seed, "Example order seed");
  t->add_option("--seed", train.seed, "Initialization and dropout seed");
  t->add_option("--out", train.out, "Checkpoint path");
  t->callback([&] { action = [&] { return cmd_train(train); }; });

  AttackArgs attack;
  auto* a = app.add_subcommand("attack", "Reconstruct a canary's unknown tokens from a checkpoint");
  a->add_option("--checkpoint", attack.checkpoint, "Checkpoint path")->required();
  a->add_option("--pattern", attack.pattern, "call, pin or color");
  a->add_option("--n", attack.n, "Unknown tokens");
  a->add_option("--prefix", attack.prefix, "Known prefix (space separated)");
  a->add_option("--v0", attack.v0, "auto, digits, numerals, colors, all, or a comma list");
  a->add_option("--intent", attack.intent, "Intent label guess");
  a->add_option("--tags", attack.tags, "Tag sequence guess (space separated)");
  a->add_option("--method", attack.method, "softmax or continuous");
  a->add_option("--truth", attack.truth, "True unknowns, to score the result");
  a->add_option("--epochs", attack.config.epochs, "Attack epochs");
  a->add_option("--lr0", attack.config.lr0, "Initial learning rate");
  a->add_option("--lr-decay", attack.config.lr_decay, "Learning rate decay per epoch");
  a->add_option("--t0", attack.config.t0, "Initial temperature");
  a->add_option("--t-decay", attack.config.t_decay, "Temperature decay per epoch");
  a->add_option("--init", attack.init, "zeros or gaussian");
  a->add_option("--seed", attack.config.seed, "Initialization seed");
  a->callback([&] { action = [&] { return cmd_attack(attack); }; });

  EvalArgs ev;
  auto* e = app.add_subcommand("eval", "Score a reconstruction or print random baselines");
  e->add_option("--truth", ev.truth, "True tokens (space separated)");
  e->add_option("--guess", ev.guess, "Guessed tokens (space separated)");
  e->add_option("--n", ev.n, "Unknown tokens for the baseline");
  e->add_option("--v0-size", ev.v0_size, "Candidate set size for the baseline");
  e->add_option("--simulate", ev.simulate, "Monte-Carlo draws to check the baseline");
  e->add_option("--seed", ev.seed, "Simulation seed");
  e->callback([&] { action = [&] { return cmd_eval(ev); }; });

  SweepArgs sweep;
  auto* w = app.add_subcommand("sweep", "Run an experiment grid from a JSON config");
  w->add_option("--config", sweep.config, "Experiment config")->required();
  w->add_option("--output-dir", sweep.output_dir, "Override the configured output directory");
  w->add_option("--workers", sweep.workers, "Parallel trials (CANEX_WORKERS overrides)");
  w->callback([&] { action = [&] { return cmd_sweep(sweep); }; });

  std::string inspect_path;
  auto* i = app.add_subcommand("inspect-checkpoint", "Print a checkpoint's config, shapes and parameter hash");
  i->add_option("checkpoint", inspect_path, "Checkpoint path")->required();
  i->callback([&] { action = [&] { return cmd_inspect(inspect_path); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    const int rc = app.exit(ex);
    return rc == 0 ? kExitOk : kExitUsage;
  }
  try {
    exit_code = action();
  } catch (const canex::InvalidArgument& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitFailure;
  }
  return exit_code;
}
