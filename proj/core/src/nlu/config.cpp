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

#include "canex/nlu/config.hpp"

#include <nlohmann/json.hpp>

#include "canex/error.hpp"

namespace canex::nlu {

void ModelConfig::validate() const {
  auto positive = [](int v, const char* name) {
    if (v < 1) throw InvalidArgument(std::string("model config: ") + name + " must be positive");
  };
  positive(vocab_size, "vocab_size");
  positive(embedding_dim, "embedding_dim");
  positive(hidden_dim, "hidden_dim");
  positive(intent_count, "intent_count");
  positive(tag_count, "tag_count");
  if (char_embeddings_enabled) {
    positive(char_vocab_size, "char_vocab_size");
    positive(char_emb_dim, "char_emb_dim");
    positive(char_conv_width, "char_conv_width");
    positive(char_filter_count, "char_filter_count");
  }
  if (dropout_embed < 0.0 || dropout_embed >= 1.0 || dropout_interlayer < 0.0 ||
      dropout_interlayer >= 1.0) {
    throw InvalidArgument("model config: dropout rates must lie in [0, 1)");
  }
}

void to_json(nlohmann::json& j, const ModelConfig& c) {
  j = nlohmann::json{{"vocab_size", c.vocab_size},
                     {"char_vocab_size", c.char_vocab_size},
                     {"embedding_dim", c.embedding_dim},
                     {"hidden_dim", c.hidden_dim},
                     {"num_bilstm_layers", ModelConfig::kBilstmLayers},
                     {"intent_count", c.intent_count},
                     {"tag_count", c.tag_count},
                     {"char_embeddings_enabled", c.char_embeddings_enabled},
                     {"char_emb_dim", c.char_emb_dim},
                     {"char_conv_width", c.char_conv_width},
                     {"char_filter_count", c.char_filter_count},
                     {"dropout_embed", c.dropout_embed},
                     {"dropout_interlayer", c.dropout_interlayer}};
}

void from_json(const nlohmann::json& j, ModelConfig& c) {
  ModelConfig d;
  c.vocab_size = j.value("vocab_size", d.vocab_size);
  c.char_vocab_size = j.value("char_vocab_size", d.char_vocab_size);
  c.embedding_dim = j.value("embedding_dim", d.embedding_dim);
  c.hidden_dim = j.value("hidden_dim", d.hidden_dim);
  if (j.value("num_bilstm_layers", ModelConfig::kBilstmLayers) != ModelConfig::kBilstmLayers) {
    throw InvalidArgument("model config: num_bilstm_layers is fixed at 2");
  }
  c.intent_count = j.value("intent_count", d.intent_count);
  c.tag_count = j.value("tag_count", d.tag_count);
  c.char_embeddings_enabled = j.value("char_embeddings_enabled", d.char_embeddings_enabled);
  c.char_emb_dim = j.value("char_emb_dim", d.char_emb_dim);
  c.char_conv_width = j.value("char_conv_width", d.char_conv_width);
  c.char_filter_count = j.value("char_filter_count", d.char_filter_count);
  c.dropout_embed = j.value("dropout_embed", d.dropout_embed);
  c.dropout_interlayer = j.value("dropout_interlayer", d.dropout_interlayer);
}

}  // namespace canex::nlu
