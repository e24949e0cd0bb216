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

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "canex/nlu/config.hpp"
#include "canex/numerics/rng.hpp"
#include "canex/numerics/tensor.hpp"

namespace canex::nlu {

using numerics::Tensor;

struct LstmDirectionParams {
  Tensor w_input;      // 4H x in, gate blocks i, f, g, o
  Tensor w_recurrent;  // 4H x H
  Tensor bias;         // 4H x 1
};

// All trainable tensors of the target model.
struct ModelParams {
  Tensor word_embeddings;  // |V| x d
  Tensor char_embeddings;  // |C| x char_emb_dim; empty when disabled
  Tensor char_kernel;      // filters x (char_emb_dim * width)
  Tensor char_bias;        // filters x 1
  // [layer][direction]; direction 0 runs left-to-right.
  std::array<std::array<LstmDirectionParams, 2>, ModelConfig::kBilstmLayers> lstm;
  Tensor intent_weight;    // intents x 2H
  Tensor intent_bias;      // intents x 1
  Tensor emission_weight;  // tags x 2H
  Tensor emission_bias;    // tags x 1
  // (tags + 2) x (tags + 2); row = from, column = to. Index tags is BOS,
  // tags + 1 is EOS. Transitions into BOS and out of EOS are -inf.
  Tensor transitions;

  // Stable, named enumeration of every tensor (empty char tensors included).
  std::vector<std::pair<std::string, Tensor*>> named();
  std::vector<std::pair<std::string, const Tensor*>> named() const;

  bool operator==(const ModelParams& other) const;
};

// Uniform(-0.1, 0.1) weights, zero biases, LSTM forget-gate bias +1, masked
// CRF transitions.
ModelParams init_params(const ModelConfig& config, numerics::Rng& rng);

// True when every entry is finite, except the masked CRF transitions which
// must be -inf.
bool params_well_formed(const ModelParams& params, int tag_count);

// SHA-256 over names, shapes and little-endian float64 values.
std::string params_hash(const ModelParams& params);

}  // namespace canex::nlu
