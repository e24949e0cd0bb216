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

// Throughput of the hot paths: one training step of the tagger, one attack
// epoch, and the CRF forward algorithm.

#include <benchmark/benchmark.h>

#include "canex/attack/attack.hpp"
#include "canex/data/canary.hpp"
#include "canex/data/synth.hpp"
#include "canex/nlu/crf.hpp"
#include "canex/numerics/rng.hpp"
#include "canex/training/trainer.hpp"

namespace {

using canex::numerics::Tensor;

canex::training::TrainResult small_model(bool char_embeddings) {
  auto synth = canex::data::SynthConfig::defaults();
  synth.size = 60;
  auto corpus = canex::data::split_train_val(canex::data::synth_corpus(synth), 0.1, 1);
  const auto canary = canex::data::generate_canary(canex::data::CanaryPattern::kPin, 4, 3, 10);
  corpus = canex::data::inject_canary(corpus, canary);
  canex::nlu::ModelConfig model;
  model.embedding_dim = 32;
  model.hidden_dim = 32;
  model.char_embeddings_enabled = char_embeddings;
  canex::training::TrainConfig train;
  train.max_epochs = 1;
  canex::training::TrainExtras extras;
  extras.extra_tokens = canex::training::default_extra_tokens();
  return canex::training::train(corpus, model, train, 5, extras);
}

void BM_TrainEpoch(benchmark::State& state) {
  auto synth = canex::data::SynthConfig::defaults();
  synth.size = 100;
  const auto corpus = canex::data::split_train_val(canex::data::synth_corpus(synth), 0.1, 1);
  canex::nlu::ModelConfig model;
  model.embedding_dim = 32;
  model.hidden_dim = static_cast<int>(state.range(0));
  canex::training::TrainConfig train;
  train.max_epochs = 1;
  for (auto _ : state) {
    auto r = canex::training::train(corpus, model, train, 5);
    benchmark::DoNotOptimize(r.report.epochs.back().train_loss);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(corpus.train.size()));
}
BENCHMARK(BM_TrainEpoch)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_AttackEpoch(benchmark::State& state) {
  const auto trained = small_model(state.range(0) != 0);
  const auto& model = trained.model;
  const auto canary = canex::data::generate_canary(canex::data::CanaryPattern::kPin, 4, 3, 10);
  const auto v0 = canex::data::make_reduced_vocabulary(model.vocab, canex::data::digit_words());
  const auto ctx = canex::attack::AttackContext::make(model, canex::attack::CanaryQuery::from_spec(canary), v0);
  canex::attack::AttackConfig cfg;
  canex::attack::AttackState st(canex::attack::init_logits(4, static_cast<int>(v0.size()), cfg.init, 0), cfg);
  for (auto _ : state) benchmark::DoNotOptimize(canex::attack::attack_step(st, ctx, cfg));
}
BENCHMARK(BM_AttackEpoch)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_CrfLogPartition(benchmark::State& state) {
  const auto len = state.range(0);
  canex::numerics::Rng rng(1);
  Tensor emissions(12, len);
  for (Eigen::Index i = 0; i < emissions.size(); ++i) emissions.data()[i] = rng.normal(0, 1);
  Tensor transitions(14, 14);
  for (Eigen::Index i = 0; i < transitions.size(); ++i) transitions.data()[i] = rng.normal(0, 1);
  canex::nlu::mask_transitions(transitions, 12);
  for (auto _ : state) benchmark::DoNotOptimize(canex::nlu::crf_log_partition(emissions, transitions));
}
BENCHMARK(BM_CrfLogPartition)->Arg(8)->Arg(32);

}  // namespace
BENCHMARK_MAIN();
