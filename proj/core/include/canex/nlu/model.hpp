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
#include <span>
#include <vector>

#include "canex/nlu/config.hpp"
#include "canex/nlu/params.hpp"
#include "canex/numerics/rng.hpp"
#include "canex/numerics/tape.hpp"

// Forward pass of the joint intent + NER tagger:
//   word embedding (+ char-CNN) -> 2 bi-LSTM layers -> softmax intent head
//   on [last forward state ; first backward state] and per-token emissions
//   into a CRF. Loss = intent cross-entropy + CRF negative log-likelihood.
namespace canex::nlu {

using numerics::Var;

// ModelParams placed on a tape, as parameters (training) or constants
// (evaluation, attack).
struct BoundParams {
  Var word_embeddings;
  Var char_embeddings;
  Var char_kernel;
  Var char_bias;
  struct Direction {
    Var w_input;
    Var w_recurrent;
    Var bias;
  };
  std::array<std::array<Direction, 2>, ModelConfig::kBilstmLayers> lstm;
  Var intent_weight;
  Var intent_bias;
  Var emission_weight;
  Var emission_bias;
  Var transitions;
};

// Binds without copying; `params` must outlive the tape. When `trainable`
// every tensor joins the tape's gradient registry in ModelParams::named()
// order (empty char tensors are skipped).
BoundParams bind_params(numerics::Tape& tape, const ModelParams& params, const ModelConfig& config,
                        bool trainable);

// Gradient-check support. The masked CRF transitions are -inf and cannot be
// perturbed, so they are split into the finite block into real tags
// ((tags+1) x tags) and the finite column into EOS ((tags+1) x 1).
// flatten_params lists every trainable tensor in ModelParams::named() order
// (empty char tensors skipped) with those two pieces in place of the full
// transition matrix; bind_flat rebuilds BoundParams from matching leaves.
std::vector<Tensor> flatten_params(const ModelParams& params, const ModelConfig& config);
BoundParams bind_flat(numerics::Tape& tape, std::span<const Var> leaves, const ModelConfig& config);

// One input position: a discrete vocabulary index, or a column of the
// caller-supplied relaxed embeddings.
struct InputSlot {
  int token = -1;
  int relaxed = -1;

  static InputSlot discrete(int token) { return {token, -1}; }
  static InputSlot soft(int column) { return {-1, column}; }
};

// Externally supplied inputs for relaxed positions: `word` is (d x k) and,
// when char embeddings are enabled, `chars` is (filters x k).
struct RelaxedInputs {
  Var word;
  Var chars;
};

// Active dropout needs a generator; nullptr means dropout off.
struct DropoutSettings {
  numerics::Rng* rng = nullptr;
  bool active() const { return rng != nullptr; }
};

// Char-CNN representation of one token: zero-padded width-w convolution
// over its char embeddings, max-pooled over positions (filters x 1).
Var char_cnn_embed(const BoundParams& bound, const ModelConfig& config, std::span<const int> char_ids);

// Input vectors (input_dim x L). `token_chars[v]` lists the char ids of
// vocabulary entry v; required when char embeddings are enabled.
Var embed_tokens(const BoundParams& bound, const ModelConfig& config, std::span<const InputSlot> slots,
                 std::span<const std::vector<int>> token_chars, const RelaxedInputs* relaxed,
                 DropoutSettings dropout);

// Layer-2 outputs (2H x L), rows [forward ; backward].
Var bilstm_forward(const BoundParams& bound, const ModelConfig& config, Var inputs,
                   DropoutSettings dropout);

struct ModelOutput {
  Var intent_logits;  // intents x 1
  Var emissions;      // tags x L
  Var intent_loss;
  Var crf_loss;
  Var loss;  // intent_loss + crf_loss
};

// Heads and losses on top of embedded inputs.
ModelOutput model_loss(const BoundParams& bound, const ModelConfig& config, Var inputs, int intent,
                       std::span<const int> tags, DropoutSettings dropout);

// Intent logits and emissions without labels.
std::pair<Var, Var> model_heads(const BoundParams& bound, const ModelConfig& config, Var inputs,
                                DropoutSettings dropout);

struct Prediction {
  int intent = 0;
  std::vector<int> tags;
};

// Discrete-token prediction (dropout off): arg-max intent, Viterbi tags.
Prediction predict(const ModelParams& params, const ModelConfig& config, std::span<const int> tokens,
                   std::span<const std::vector<int>> token_chars);

// Discrete-token total loss (dropout off).
double discrete_loss(const ModelParams& params, const ModelConfig& config, std::span<const int> tokens,
                     std::span<const std::vector<int>> token_chars, int intent, std::span<const int> tags);

}  // namespace canex::nlu
