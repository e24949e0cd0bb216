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

#include "canex/nlu/params.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <limits>

#include "canex/nlu/crf.hpp"
#include "canex/numerics/hash.hpp"

namespace canex::nlu {
namespace {

Tensor uniform(Eigen::Index rows, Eigen::Index cols, numerics::Rng& rng) {
  Tensor t(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) t(r, c) = rng.uniform(-0.1, 0.1);
  }
  return t;
}

template <typename Self, typename Out>
void collect(Self& p, Out& out) {
  out.emplace_back("word_embeddings", &p.word_embeddings);
  out.emplace_back("char_embeddings", &p.char_embeddings);
  out.emplace_back("char_kernel", &p.char_kernel);
  out.emplace_back("char_bias", &p.char_bias);
  for (std::size_t layer = 0; layer < p.lstm.size(); ++layer) {
    for (std::size_t dir = 0; dir < 2; ++dir) {
      const std::string prefix = "lstm" + std::to_string(layer) + (dir == 0 ? ".fwd." : ".bwd.");
      out.emplace_back(prefix + "w_input", &p.lstm[layer][dir].w_input);
      out.emplace_back(prefix + "w_recurrent", &p.lstm[layer][dir].w_recurrent);
      out.emplace_back(prefix + "bias", &p.lstm[layer][dir].bias);
    }
  }
  out.emplace_back("intent_weight", &p.intent_weight);
  out.emplace_back("intent_bias", &p.intent_bias);
  out.emplace_back("emission_weight", &p.emission_weight);
  out.emplace_back("emission_bias", &p.emission_bias);
  out.emplace_back("transitions", &p.transitions);
}

}  // namespace

std::vector<std::pair<std::string, Tensor*>> ModelParams::named() {
  std::vector<std::pair<std::string, Tensor*>> out;
  collect(*this, out);
  return out;
}

std::vector<std::pair<std::string, const Tensor*>> ModelParams::named() const {
  std::vector<std::pair<std::string, const Tensor*>> out;
  collect(*this, out);
  return out;
}

bool ModelParams::operator==(const ModelParams& other) const {
  const auto a = named();
  const auto b = other.named();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Tensor& x = *a[i].second;
    const Tensor& y = *b[i].second;
    if (x.rows() != y.rows() || x.cols() != y.cols()) return false;
    if (x.size() > 0 && std::memcmp(x.data(), y.data(), sizeof(double) * x.size()) != 0) return false;
  }
  return true;
}

ModelParams init_params(const ModelConfig& config, numerics::Rng& rng) {
  config.validate();
  ModelParams p;
  const int h = config.hidden_dim;
  p.word_embeddings = uniform(config.vocab_size, config.embedding_dim, rng);
  if (config.char_embeddings_enabled) {
    p.char_embeddings = uniform(config.char_vocab_size, config.char_emb_dim, rng);
    p.char_kernel = uniform(config.char_filter_count, config.char_emb_dim * config.char_conv_width, rng);
    p.char_bias = Tensor::Zero(config.char_filter_count, 1);
  }
  for (int layer = 0; layer < ModelConfig::kBilstmLayers; ++layer) {
    const int in = layer == 0 ? config.input_dim() : 2 * h;
    for (auto& dir : p.lstm[static_cast<std::size_t>(layer)]) {
      dir.w_input = uniform(4 * h, in, rng);
      dir.w_recurrent = uniform(4 * h, h, rng);
      dir.bias = Tensor::Zero(4 * h, 1);
      dir.bias.middleRows(h, h).setOnes();
    }
  }
  p.intent_weight = uniform(config.intent_count, 2 * h, rng);
  p.intent_bias = Tensor::Zero(config.intent_count, 1);
  p.emission_weight = uniform(config.tag_count, 2 * h, rng);
  p.emission_bias = Tensor::Zero(config.tag_count, 1);
  p.transitions = uniform(config.tag_count + 2, config.tag_count + 2, rng);
  mask_transitions(p.transitions, config.tag_count);
  return p;
}

bool params_well_formed(const ModelParams& params, int tag_count) {
  for (const auto& [name, t] : params.named()) {
    if (name == "transitions") continue;
    if (!t->allFinite()) return false;
  }
  const Tensor& tr = params.transitions;
  const int bos = crf_bos(tag_count);
  const int eos = crf_eos(tag_count);
  if (tr.rows() != tag_count + 2 || tr.cols() != tag_count + 2) return false;
  for (int from = 0; from < tag_count + 2; ++from) {
    for (int to = 0; to < tag_count + 2; ++to) {
      const bool masked = to == bos || from == eos;
      const double v = tr(from, to);
      if (masked ? !(std::isinf(v) && v < 0) : !std::isfinite(v)) return false;
    }
  }
  return true;
}

std::string params_hash(const ModelParams& params) {
  numerics::Sha256 h;
  for (const auto& [name, t] : params.named()) {
    h.update(name);
    h.update(":" + std::to_string(t->rows()) + "x" + std::to_string(t->cols()) + ";");
    std::vector<std::uint8_t> bytes;
    bytes.reserve(static_cast<std::size_t>(t->size()) * 8);
    for (Eigen::Index r = 0; r < t->rows(); ++r) {
      for (Eigen::Index c = 0; c < t->cols(); ++c) {
        const auto bits = std::bit_cast<std::uint64_t>((*t)(r, c));
        for (int b = 0; b < 8; ++b) bytes.push_back(static_cast<std::uint8_t>(bits >> (8 * b)));
      }
    }
    h.update(bytes);
  }
  return h.finish_hex();
}

}  // namespace canex::nlu
