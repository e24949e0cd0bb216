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

#include <vector>

#include "canex/data/canary.hpp"
#include "canex/data/synth.hpp"
#include "canex/numerics/rng.hpp"
#include "canex/numerics/tensor.hpp"
#include "canex/training/trainer.hpp"

namespace canex::testing {

inline numerics::Tensor random_tensor(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed, double scale = 1.0) {
  numerics::Rng rng(seed);
  numerics::Tensor t(rows, cols);
  for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = rng.normal(0.0, scale);
  return t;
}

// Small corpus with a pin canary, for end-to-end tests.
inline data::Corpus tiny_corpus(std::size_t size, const data::CanarySpec* canary) {
  auto synth = data::SynthConfig::defaults();
  synth.size = size;
  auto corpus = data::split_train_val(data::synth_corpus(synth), 0.2, 3);
  return canary ? data::inject_canary(corpus, *canary) : corpus;
}

inline nlu::ModelConfig tiny_model_config(bool char_embeddings = false) {
  nlu::ModelConfig c;
  c.embedding_dim = 8;
  c.hidden_dim = 8;
  c.char_embeddings_enabled = char_embeddings;
  c.char_emb_dim = 4;
  c.char_filter_count = 5;
  return c;
}

inline training::TrainResult train_tiny(const data::Corpus& corpus, int epochs, bool char_embeddings = false,
                                        std::uint64_t seed = 1) {
  training::TrainConfig tc;
  tc.max_epochs = epochs;
  tc.learning_rate = 1e-2;
  training::TrainExtras extras;
  extras.extra_tokens = training::default_extra_tokens();
  return training::train(corpus, tiny_model_config(char_embeddings), tc, seed, extras);
}

}  // namespace canex::testing
