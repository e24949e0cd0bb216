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

#include "canex/attack/attack.hpp"

#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "canex/error.hpp"
#include "canex/nlu/model.hpp"
#include "canex/numerics/functions.hpp"
#include "canex/numerics/ops.hpp"
#include "canex/numerics/rng.hpp"

namespace canex::attack {

using numerics::Tape;
using numerics::Var;
namespace ops = numerics;

std::string to_string(InitScheme scheme) { return scheme == InitScheme::kZeros ? "zeros" : "gaussian"; }

InitScheme parse_init_scheme(const std::string& name) {
  if (name == "zeros") return InitScheme::kZeros;
  if (name == "gaussian") return InitScheme::kGaussian;
  throw InvalidArgument("unknown logit init scheme '" + name + "' (expected zeros or gaussian)");
}

void AttackConfig::validate() const {
  if (epochs < 0) throw InvalidArgument("attack config: epochs must be >= 0");
  if (!(lr0 > 0.0)) throw InvalidArgument("attack config: lr0 must be > 0");
  if (!(t0 > 0.0)) throw InvalidArgument("attack config: t0 must be > 0");
  if (!(lr_decay > 0.0 && lr_decay < 1.0)) throw InvalidArgument("attack config: lr_decay must lie in (0, 1)");
  if (!(t_decay > 0.0 && t_decay < 1.0)) throw InvalidArgument("attack config: t_decay must lie in (0, 1)");
}

void to_json(nlohmann::json& j, const AttackConfig& c) {
  j = nlohmann::json{{"epochs", c.epochs},   {"lr0", c.lr0},   {"lr_decay", c.lr_decay},
                     {"t0", c.t0},           {"t_decay", c.t_decay}, {"init", to_string(c.init)},
                     {"seed", c.seed},       {"full_vocabulary", c.full_vocabulary}};
}

void from_json(const nlohmann::json& j, AttackConfig& c) {
  AttackConfig d;
  c.epochs = j.value("epochs", d.epochs);
  c.lr0 = j.value("lr0", d.lr0);
  c.lr_decay = j.value("lr_decay", d.lr_decay);
  c.t0 = j.value("t0", d.t0);
  c.t_decay = j.value("t_decay", d.t_decay);
  c.init = parse_init_scheme(j.value("init", to_string(d.init)));
  c.seed = j.value("seed", d.seed);
  c.full_vocabulary = j.value("full_vocabulary", d.full_vocabulary);
}

CanaryQuery CanaryQuery::from_spec(const data::CanarySpec& spec) {
  return {spec.prefix, static_cast<int>(spec.unknowns.size()), spec.intent, spec.tags};
}

AttackContext AttackContext::make(const training::TrainedModel& model, const CanaryQuery& query,
                                  data::ReducedVocabulary v0) {
  if (query.unknowns < 1) throw InvalidArgument("attack: the canary needs at least one unknown token");
  if (query.tags.size() != query.prefix.size() + static_cast<std::size_t>(query.unknowns)) {
    throw InvalidArgument("attack: tag count must equal prefix length plus unknowns");
  }
  if (v0.size() < 2) throw InvalidArgument("attack: the candidate set needs at least two tokens");

  AttackContext ctx;
  ctx.model = &model;
  ctx.prefix_ids = model.vocab.lookup_all(query.prefix);
  ctx.unknowns = query.unknowns;
  ctx.intent = model.intents.index(query.intent);
  for (const auto& t : query.tags) ctx.tags.push_back(model.tags.index(t));

  const Tensor& w = model.params.word_embeddings;
  ctx.w0_t.resize(w.cols(), static_cast<Eigen::Index>(v0.size()));
  for (std::size_t k = 0; k < v0.size(); ++k) {
    const int idx = v0.indices[k];
    if (idx < 0 || idx >= w.rows()) throw ContractViolation("attack: candidate index outside the embedding table");
    ctx.w0_t.col(static_cast<Eigen::Index>(k)) = w.row(idx).transpose();
  }
  if (model.config.char_embeddings_enabled) {
    Tape tape;
    const auto bound = nlu::bind_params(tape, model.params, model.config, false);
    ctx.chars0.resize(model.config.char_filter_count, static_cast<Eigen::Index>(v0.size()));
    for (std::size_t k = 0; k < v0.size(); ++k) {
      const auto& ids = model.token_chars.at(static_cast<std::size_t>(v0.indices[k]));
      ctx.chars0.col(static_cast<Eigen::Index>(k)) = nlu::char_cnn_embed(bound, model.config, ids).value();
    }
  }
  ctx.v0 = std::move(v0);
  return ctx;
}

Tensor init_logits(int n, int v0_size, InitScheme scheme, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("init_logits: n must be >= 1");
  if (v0_size < 2) throw InvalidArgument("init_logits: a single candidate makes the attack degenerate");
  Tensor z = Tensor::Zero(n, v0_size);
  if (scheme == InitScheme::kGaussian) {
    numerics::Rng rng = numerics::Rng(seed).split("attack-init");
    for (Eigen::Index r = 0; r < z.rows(); ++r) {
      for (Eigen::Index c = 0; c < z.cols(); ++c) z(r, c) = rng.normal(0.0, 0.1);
    }
  }
  return z;
}

numerics::Vector relax_embed(const numerics::Vector& z, double temperature, const Tensor& w0_t) {
  if (z.size() != w0_t.cols()) throw ContractViolation("relax_embed: logit width differs from |V0|");
  return w0_t * numerics::softmax_with_temperature(z, temperature);
}

namespace {

std::vector<nlu::InputSlot> attack_slots(const AttackContext& ctx) {
  std::vector<nlu::InputSlot> slots;
  for (int id : ctx.prefix_ids) slots.push_back(nlu::InputSlot::discrete(id));
  for (int i = 0; i < ctx.unknowns; ++i) slots.push_back(nlu::InputSlot::soft(i));
  return slots;
}

Var loss_from_inputs(Tape& tape, const AttackContext& ctx, Var word, Var chars) {
  const auto& model = *ctx.model;
  const auto bound = nlu::bind_params(tape, model.params, model.config, false);
  const nlu::RelaxedInputs relaxed{word, chars};
  const auto slots = attack_slots(ctx);
  const Var x = nlu::embed_tokens(bound, model.config, slots, model.token_chars, &relaxed, {});
  return nlu::model_loss(bound, model.config, x, ctx.intent, ctx.tags, {}).loss;
}

void check_context(const AttackContext& ctx) {
  if (ctx.model == nullptr) throw ContractViolation("attack: context has no model");
}

}  // namespace

Var attack_loss(Tape& tape, const AttackContext& ctx, Var z, double temperature) {
  check_context(ctx);
  if (z.rows() != ctx.unknowns || z.cols() != ctx.w0_t.cols()) {
    throw ContractViolation("attack_loss: Z must be n x |V0|");
  }
  const Var at = ops::transpose(ops::softmax_rows(z, temperature));
  const Var word = ops::matmul(tape.constant_ref(ctx.w0_t), at);
  Var chars;
  if (ctx.model->config.char_embeddings_enabled) chars = ops::matmul(tape.constant_ref(ctx.chars0), at);
  return loss_from_inputs(tape, ctx, word, chars);
}

double attack_forward_loss(const AttackContext& ctx, const Tensor& z, double temperature) {
  Tape tape;
  return attack_loss(tape, ctx, tape.constant_ref(z), temperature).scalar();
}

void verify_attack_registry(const Tape& tape, Var z) {
  const auto& reg = tape.registry();
  if (reg.size() != 1 || reg.front().id() != z.id()) {
    throw ContractViolation("attack: gradient registry must hold Z only; model parameters are frozen");
  }
}

AttackState::AttackState(Tensor initial, const AttackConfig& config)
    : z(std::move(initial)), temperature(config.t0), learning_rate(config.lr0) {
  const Tensor* shape = &z;
  adam = numerics::AdamState(std::span(&shape, 1), {.learning_rate = config.lr0});
}

namespace {

// One Adam step on `target` given a loss builder; shared by both attacks.
template <typename BuildLoss>
double optimize_step(Tensor& target, numerics::AdamState& adam, double lr, int epoch, BuildLoss&& build) {
  Tape tape;
  const Var v = tape.parameter_ref(target);
  const Var loss = build(tape, v);
  verify_attack_registry(tape, v);
  const double value = loss.scalar();
  if (!std::isfinite(value)) {
    throw DivergenceError("attack: non-finite loss at epoch " + std::to_string(epoch));
  }
  tape.backward(loss);
  adam.set_learning_rate(lr);
  Tensor* p = &target;
  const Tensor* g = &v.grad();
  adam.apply(std::span(&p, 1), std::span(&g, 1));
  if (!target.allFinite()) {
    throw DivergenceError("attack: optimized inputs became non-finite at epoch " + std::to_string(epoch));
  }
  return value;
}

}  // namespace

double attack_step(AttackState& state, const AttackContext& ctx, const AttackConfig& config) {
  const double t = state.temperature;
  const double loss = optimize_step(state.z, state.adam, state.learning_rate, state.epoch,
                                    [&](Tape& tape, Var z) { return attack_loss(tape, ctx, z, t); });
  state.temperature *= config.t_decay;
  state.learning_rate *= config.lr_decay;
  ++state.epoch;
  return loss;
}

std::vector<int> decode_rows(const Tensor& activations, std::vector<int>* ties) {
  std::vector<int> out;
  for (Eigen::Index r = 0; r < activations.rows(); ++r) {
    Eigen::Index best = 0;
    int count = 1;
    for (Eigen::Index c = 1; c < activations.cols(); ++c) {
      if (activations(r, c) > activations(r, best)) {
        best = c;
        count = 1;
      } else if (activations(r, c) == activations(r, best)) {
        ++count;
      }
    }
    if (count > 1 && ties != nullptr) ties->push_back(static_cast<int>(r));
    out.push_back(static_cast<int>(best));
  }
  return out;
}

namespace {

void fill_tokens(ReconstructionResult& r, const AttackContext& ctx) {
  for (int k : r.v0_choice) r.tokens.push_back(ctx.v0.tokens[static_cast<std::size_t>(k)]);
}

}  // namespace

ReconstructionResult run_attack(const AttackContext& ctx, const AttackConfig& config) {
  config.validate();
  check_context(ctx);
  AttackState state(init_logits(ctx.unknowns, static_cast<int>(ctx.v0.size()), config.init, config.seed), config);
  ReconstructionResult r;
  r.loss_trace.reserve(static_cast<std::size_t>(config.epochs));
  for (int e = 0; e < config.epochs; ++e) r.loss_trace.push_back(attack_step(state, ctx, config));

  r.activations.resize(state.z.rows(), state.z.cols());
  for (Eigen::Index i = 0; i < state.z.rows(); ++i) {
    r.activations.row(i) =
        numerics::softmax_with_temperature(numerics::Vector(state.z.row(i).transpose()), state.temperature)
            .transpose();
  }
  r.final_loss = attack_forward_loss(ctx, state.z, state.temperature);
  r.v0_choice = decode_rows(r.activations, &r.ties);
  fill_tokens(r, ctx);
  r.final_temperature = state.temperature;
  r.final_learning_rate = state.learning_rate;
  return r;
}

ReconstructionResult continuous_baseline_attack(const AttackContext& ctx, const AttackConfig& config,
                                                const std::optional<Tensor>& initial) {
  config.validate();
  check_context(ctx);
  const auto d = ctx.w0_t.rows();
  const auto n = static_cast<Eigen::Index>(ctx.unknowns);
  Tensor e;
  if (initial) {
    if (initial->rows() != d || initial->cols() != n) {
      throw ContractViolation("continuous baseline: initial vectors must be d x n");
    }
    e = *initial;
  } else {
    numerics::Rng rng = numerics::Rng(config.seed).split("baseline-init");
    e.resize(d, n);
    for (Eigen::Index c = 0; c < n; ++c) {
      for (Eigen::Index r = 0; r < d; ++r) e(r, c) = rng.uniform(-0.1, 0.1);
    }
  }
  Tensor chars;
  if (ctx.model->config.char_embeddings_enabled) {
    chars = ctx.chars0.rowwise().mean().replicate(1, n);
  }

  const Tensor* shape = &e;
  numerics::AdamState adam(std::span(&shape, 1), {.learning_rate = config.lr0});
  double lr = config.lr0;
  ReconstructionResult r;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    r.loss_trace.push_back(optimize_step(e, adam, lr, epoch, [&](Tape& tape, Var word) {
      const Var c = chars.size() > 0 ? tape.constant_ref(chars) : Var{};
      return loss_from_inputs(tape, ctx, word, c);
    }));
    lr *= config.lr_decay;
  }
  {
    Tape tape;
    const Var c = chars.size() > 0 ? tape.constant_ref(chars) : Var{};
    r.final_loss = loss_from_inputs(tape, ctx, tape.constant_ref(e), c).scalar();
  }

  // Nearest candidate per column; negated squared distances reuse the
  // arg-max decoder and its tie rule.
  Tensor closeness(n, ctx.w0_t.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < ctx.w0_t.cols(); ++k) {
      closeness(i, k) = -(ctx.w0_t.col(k) - e.col(i)).squaredNorm();
    }
  }
  r.v0_choice = decode_rows(closeness, &r.ties);
  fill_tokens(r, ctx);
  r.final_learning_rate = lr;
  return r;
}

void to_json(nlohmann::json& j, const ReconstructionResult& r) {
  nlohmann::json act = nlohmann::json::array();
  for (Eigen::Index i = 0; i < r.activations.rows(); ++i) {
    std::vector<double> row(static_cast<std::size_t>(r.activations.cols()));
    for (Eigen::Index k = 0; k < r.activations.cols(); ++k) row[static_cast<std::size_t>(k)] = r.activations(i, k);
    act.push_back(row);
  }
  j = nlohmann::json{{"tokens", r.tokens},
                     {"v0_choice", r.v0_choice},
                     {"activations", act},
                     {"final_loss", r.final_loss},
                     {"loss_trace", r.loss_trace},
                     {"ties", r.ties},
                     {"final_temperature", r.final_temperature},
                     {"final_learning_rate", r.final_learning_rate}};
}

}  // namespace canex::attack
