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
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "canex/data/example.hpp"
#include "canex/data/vocabulary.hpp"
#include "canex/nlu/config.hpp"
#include "canex/nlu/embedding_file.hpp"
#include "canex/nlu/params.hpp"

namespace canex::training {

struct TrainConfig {
  int max_epochs = 60;
  double learning_rate = 1e-3;
  bool early_stopping_enabled = false;
  int patience = 20;
  bool dropout_enabled = false;
  int batch_size = 1;
  bool train_embeddings = true;
  std::uint64_t shuffle_seed = 0;

  void validate() const;
  bool operator==(const TrainConfig&) const = default;
};

void to_json(nlohmann::json& j, const TrainConfig& c);
void from_json(const nlohmann::json& j, TrainConfig& c);

struct EncodedExample {
  std::vector<int> tokens;
  int intent = 0;
  std::vector<int> tags;
};

// Everything an open-box adversary sees: architecture, parameters,
// vocabulary and label sets.
struct TrainedModel {
  nlu::ModelConfig config;
  data::Vocabulary vocab;
  data::Vocabulary chars;
  data::LabelSet intents;
  data::LabelSet tags;
  nlu::ModelParams params;
  // char ids per vocabulary entry, derived from vocab and chars.
  std::vector<std::vector<int>> token_chars;

  void rebuild_token_chars();
  // Throws ContractViolation for labels outside the model's label sets.
  EncodedExample encode(const data::LabeledExample& example) const;
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
};

struct ModelQuality {
  double intent_accuracy = 0.0;
  double tag_accuracy = 0.0;
  std::size_t examples = 0;
};

struct TrainReport {
  std::vector<EpochRecord> epochs;
  int stopped_epoch = 0;
  int best_epoch = 0;  // epoch whose parameters were returned
  ModelQuality val_quality;
  std::vector<std::string> embeddings_random_init;  // tokens absent from a pretrained file

  bool operator==(const TrainReport& other) const;
};

void to_json(nlohmann::json& j, const TrainReport& r);

struct TrainExtras {
  const nlu::PretrainedEmbeddings* pretrained = nullptr;
  // Added to the vocabulary on top of the corpus tokens.
  std::vector<std::string> extra_tokens;
  std::function<void(const EpochRecord&)> on_epoch;
};

// Candidate tokens of every canary pattern (digit words and colors).
std::vector<std::string> default_extra_tokens();

struct TrainResult {
  TrainedModel model;
  TrainReport report;
};

// Adam-trained target model. `model_template` supplies dimensions and
// defense knobs; vocabulary and label sizes come from the corpus. Dropout
// runs only on training passes. With early stopping the parameters of the
// best validation epoch are returned. Throws DivergenceError when a loss
// turns non-finite.
TrainResult train(const data::Corpus& corpus, const nlu::ModelConfig& model_template,
                  const TrainConfig& config, std::uint64_t seed, const TrainExtras& extras = {});

// Intent accuracy (arg-max) and per-token Viterbi tag accuracy.
ModelQuality evaluate_model(const TrainedModel& model, std::span<const data::LabeledExample> examples);

// Mean total loss with dropout off.
double mean_loss(const TrainedModel& model, std::span<const EncodedExample> examples);

}  // namespace canex::training
