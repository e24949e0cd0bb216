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

#include "canex/nlu/model.hpp"

#include <limits>
#include <string>

#include "canex/error.hpp"
#include "canex/nlu/crf.hpp"
#include "canex/numerics/ops.hpp"

namespace canex::nlu {

namespace ops = numerics;
using numerics::Tape;

namespace {

Var bind(Tape& tape, const Tensor& t, bool trainable) {
  return trainable ? tape.parameter_ref(t) : tape.constant_ref(t);
}

Var apply_dropout(Var x, double rate, DropoutSettings dropout) {
  if (!dropout.active() || rate <= 0.0) return x;
  Tensor mask(x.rows(), x.cols());
  const double keep_scale = 1.0 / (1.0 - rate);
  for (Eigen::Index c = 0; c < mask.cols(); ++c) {
    for (Eigen::Index r = 0; r < mask.rows(); ++r) {
      mask(r, c) = dropout.rng->bernoulli(rate) ? 0.0 : keep_scale;
    }
  }
  return ops::hadamard(x, x.tape().constant(std::move(mask)));
}

}  // namespace

BoundParams bind_params(Tape& tape, const ModelParams& params, const ModelConfig& config,
                        bool trainable) {
  BoundParams b;
  b.word_embeddings = bind(tape, params.word_embeddings, trainable);
  if (config.char_embeddings_enabled) {
    b.char_embeddings = bind(tape, params.char_embeddings, trainable);
    b.char_kernel = bind(tape, params.char_kernel, trainable);
    b.char_bias = bind(tape, params.char_bias, trainable);
  }
  for (std::size_t layer = 0; layer < params.lstm.size(); ++layer) {
    for (std::size_t dir = 0; dir < 2; ++dir) {
      const auto& src = params.lstm[layer][dir];
      auto& dst = b.lstm[layer][dir];
      dst.w_input = bind(tape, src.w_input, trainable);
      dst.w_recurrent = bind(tape, src.w_recurrent, trainable);
      dst.bias = bind(tape, src.bias, trainable);
    }
  }
  b.intent_weight = bind(tape, params.intent_weight, trainable);
  b.intent_bias = bind(tape, params.intent_bias, trainable);
  b.emission_weight = bind(tape, params.emission_weight, trainable);
  b.emission_bias = bind(tape, params.emission_bias, trainable);
  b.transitions = bind(tape, params.transitions, trainable);
  return b;
}

std::vector<Tensor> flatten_params(const ModelParams& params, const ModelConfig& config) {
  std::vector<Tensor> out;
  for (const auto& [name, t] : params.named()) {
    if (t->size() == 0) continue;
    if (name != "transitions") {
      out.push_back(*t);
      continue;
    }
    const Eigen::Index tags = config.tag_count;
    out.push_back(t->block(0, 0, tags + 1, tags));
    out.push_back(t->block(0, crf_eos(config.tag_count), tags + 1, 1));
  }
  return out;
}

BoundParams bind_flat(Tape& tape, std::span<const Var> leaves, const ModelConfig& config) {
  const std::size_t expected = config.char_embeddings_enabled ? 22 : 19;
  if (leaves.size() != expected) throw ContractViolation("bind_flat: unexpected leaf count");
  std::size_t k = 0;
  BoundParams b;
  b.word_embeddings = leaves[k++];
  if (config.char_embeddings_enabled) {
    b.char_embeddings = leaves[k++];
    b.char_kernel = leaves[k++];
    b.char_bias = leaves[k++];
  }
  for (auto& layer : b.lstm) {
    for (auto& dir : layer) {
      dir.w_input = leaves[k++];
      dir.w_recurrent = leaves[k++];
      dir.bias = leaves[k++];
    }
  }
  b.intent_weight = leaves[k++];
  b.intent_bias = leaves[k++];
  b.emission_weight = leaves[k++];
  b.emission_bias = leaves[k++];
  const Eigen::Index tags = config.tag_count;
  const double ninf = -std::numeric_limits<double>::infinity();
  const Var into_bos = tape.constant(Tensor::Constant(tags + 1, 1, ninf));
  const Var top = ops::concat_cols({leaves[k], into_bos, leaves[k + 1]});
  const Var eos_row = tape.constant(Tensor::Constant(1, tags + 2, ninf));
  b.transitions = ops::concat_rows({top, eos_row});
  return b;
}

Var char_cnn_embed(const BoundParams& bound, const ModelConfig& config, std::span<const int> char_ids) {
  if (!config.char_embeddings_enabled) throw ContractViolation("char_cnn_embed: char embeddings disabled");
  if (char_ids.empty()) throw ContractViolation("char_cnn_embed: empty token");
  const Var chars = ops::gather_rows_as_cols(bound.char_embeddings, char_ids);
  const Var windows = ops::unfold_windows(chars, config.char_conv_width);
  const Var conv = ops::add_bias(ops::matmul(bound.char_kernel, windows), bound.char_bias);
  return ops::rowwise_max(conv);
}

Var embed_tokens(const BoundParams& bound, const ModelConfig& config, std::span<const InputSlot> slots,
                 std::span<const std::vector<int>> token_chars, const RelaxedInputs* relaxed,
                 DropoutSettings dropout) {
  if (slots.empty()) throw ContractViolation("embed_tokens: empty input");
  const auto vocab = static_cast<int>(bound.word_embeddings.rows());

  // Runs of consecutive discrete tokens become one gather.
  std::vector<Var> word_parts;
  std::vector<Var> char_parts;
  std::vector<int> run;
  auto flush = [&] {
    if (run.empty()) return;
    word_parts.push_back(ops::gather_rows_as_cols(bound.word_embeddings, run));
    run.clear();
  };
  for (const InputSlot& slot : slots) {
    if (slot.token >= 0) {
      if (slot.token >= vocab) {
        throw ContractViolation("embed_tokens: token index " + std::to_string(slot.token) +
                                " outside vocabulary of " + std::to_string(vocab));
      }
      run.push_back(slot.token);
      if (config.char_embeddings_enabled) {
        if (static_cast<std::size_t>(slot.token) >= token_chars.size()) {
          throw ContractViolation("embed_tokens: missing char ids for token " + std::to_string(slot.token));
        }
        char_parts.push_back(char_cnn_embed(bound, config, token_chars[static_cast<std::size_t>(slot.token)]));
      }
    } else {
      if (relaxed == nullptr || slot.relaxed < 0 || slot.relaxed >= relaxed->word.cols()) {
        throw ContractViolation("embed_tokens: relaxed slot without matching relaxed input column");
      }
      if (relaxed->word.rows() != config.embedding_dim) {
        throw ContractViolation("embed_tokens: relaxed vectors must have width embedding_dim");
      }
      flush();
      word_parts.push_back(ops::slice_cols(relaxed->word, slot.relaxed, 1));
      if (config.char_embeddings_enabled) {
        if (!relaxed->chars.valid()) throw ContractViolation("embed_tokens: relaxed char inputs missing");
        char_parts.push_back(ops::slice_cols(relaxed->chars, slot.relaxed, 1));
      }
    }
  }
  flush();

  Var x = word_parts.size() == 1 ? word_parts.front() : ops::concat_cols(word_parts);
  if (config.char_embeddings_enabled) x = ops::concat_rows({x, ops::concat_cols(char_parts)});
  return apply_dropout(x, config.dropout_embed, dropout);
}

Var bilstm_forward(const BoundParams& bound, const ModelConfig& config, Var inputs,
                   DropoutSettings dropout) {
  if (inputs.cols() < 1) throw ContractViolation("bilstm_forward: empty sequence");
  Var x = inputs;
  for (int layer = 0; layer < ModelConfig::kBilstmLayers; ++layer) {
    if (layer > 0) x = apply_dropout(x, config.dropout_interlayer, dropout);
    std::vector<Var> dirs;
    for (int dir = 0; dir < 2; ++dir) {
      const auto& p = bound.lstm[static_cast<std::size_t>(layer)][static_cast<std::size_t>(dir)];
      const Var proj = ops::add_bias(ops::matmul(p.w_input, x), p.bias);
      dirs.push_back(ops::lstm_sequence(proj, p.w_recurrent, dir == 1));
    }
    x = ops::concat_rows(dirs);
  }
  return x;
}

std::pair<Var, Var> model_heads(const BoundParams& bound, const ModelConfig& config, Var inputs,
                                DropoutSettings dropout) {
  const Var states = bilstm_forward(bound, config, inputs, dropout);
  const Eigen::Index h = config.hidden_dim;
  const Eigen::Index len = states.cols();
  const Var summary = ops::concat_rows({ops::slice_rows(ops::slice_cols(states, len - 1, 1), 0, h),
                                       ops::slice_rows(ops::slice_cols(states, 0, 1), h, h)});
  const Var intent_logits = ops::add_bias(ops::matmul(bound.intent_weight, summary), bound.intent_bias);
  const Var emissions = ops::add_bias(ops::matmul(bound.emission_weight, states), bound.emission_bias);
  return {intent_logits, emissions};
}

ModelOutput model_loss(const BoundParams& bound, const ModelConfig& config, Var inputs, int intent,
                       std::span<const int> tags, DropoutSettings dropout) {
  if (intent < 0 || intent >= config.intent_count) {
    throw ContractViolation("model_loss: intent label " + std::to_string(intent) + " out of range");
  }
  if (static_cast<Eigen::Index>(tags.size()) != inputs.cols()) {
    throw ContractViolation("model_loss: tag count differs from sequence length");
  }
  ModelOutput out;
  std::tie(out.intent_logits, out.emissions) = model_heads(bound, config, inputs, dropout);
  out.intent_loss = ops::cross_entropy(out.intent_logits, intent);
  out.crf_loss = crf_nll(out.emissions, bound.transitions, tags);
  out.loss = ops::add(out.intent_loss, out.crf_loss);
  return out;
}

namespace {

std::vector<InputSlot> discrete_slots(std::span<const int> tokens) {
  std::vector<InputSlot> slots;
  slots.reserve(tokens.size());
  for (int t : tokens) slots.push_back(InputSlot::discrete(t));
  return slots;
}

}  // namespace

Prediction predict(const ModelParams& params, const ModelConfig& config, std::span<const int> tokens,
                   std::span<const std::vector<int>> token_chars) {
  Tape tape;
  const BoundParams bound = bind_params(tape, params, config, false);
  const auto slots = discrete_slots(tokens);
  const Var x = embed_tokens(bound, config, slots, token_chars, nullptr, {});
  const auto [logits, emissions] = model_heads(bound, config, x, {});
  Prediction p;
  logits.value().col(0).maxCoeff(&p.intent);
  p.tags = crf_viterbi_decode(emissions.value(), params.transitions).tags;
  return p;
}

double discrete_loss(const ModelParams& params, const ModelConfig& config, std::span<const int> tokens,
                     std::span<const std::vector<int>> token_chars, int intent, std::span<const int> tags) {
  Tape tape;
  const BoundParams bound = bind_params(tape, params, config, false);
  const auto slots = discrete_slots(tokens);
  const Var x = embed_tokens(bound, config, slots, token_chars, nullptr, {});
  return model_loss(bound, config, x, intent, tags, {}).loss.scalar();
}

}  // namespace canex::nlu
