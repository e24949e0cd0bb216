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

#include <nlohmann/json_fwd.hpp>

namespace canex::nlu {

struct ModelConfig {
  int vocab_size = 0;
  int char_vocab_size = 0;
  int embedding_dim = 50;
  int hidden_dim = 64;  // per direction
  static constexpr int kBilstmLayers = 2;
  int intent_count = 0;
  int tag_count = 0;

  bool char_embeddings_enabled = false;
  int char_emb_dim = 16;
  int char_conv_width = 3;
  int char_filter_count = 30;

  // Rates used when dropout is active: on the embedding output and between
  // the two bi-LSTM layers.
  double dropout_embed = 0.2;
  double dropout_interlayer = 0.1;

  int input_dim() const {
    return embedding_dim + (char_embeddings_enabled ? char_filter_count : 0);
  }

  // Throws InvalidArgument on non-positive sizes or rates outside [0, 1).
  void validate() const;

  bool operator==(const ModelConfig&) const = default;
};

void to_json(nlohmann::json& j, const ModelConfig& c);
void from_json(const nlohmann::json& j, ModelConfig& c);

}  // namespace canex::nlu
