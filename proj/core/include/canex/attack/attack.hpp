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
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "canex/data/canary.hpp"
#include "canex/data/vocabulary.hpp"
#include "canex/numerics/adam.hpp"
#include "canex/numerics/tape.hpp"
#include "canex/training/trainer.hpp"

// Canary extraction against a frozen tagger.
//
// Each unknown position i owns a logit row z_i over the candidate set V0.
// The relaxed input is e'_i = W0^T softmax(z_i / T), so the model sees a
// convex mix of candidate embeddings. Z alone is optimized with Adam against
// the model's loss on the known labels while T and the learning rate decay
// geometrically per epoch; the answer is the arg-max of each row.
namespace canex::attack {

using numerics::Tensor;

enum class InitScheme { kZeros, kGaussian };

std::string to_string(InitScheme scheme);
// Throws InvalidArgument for names other than "zeros" and "gaussian".
InitScheme parse_init_scheme(const std::string& name);

struct AttackConfig {
  int epochs = 250;
  double lr0 = 6.5e-3;
  double lr_decay = 0.995;
  double t0 = 0.1;
  double t_decay = 0.997;
  InitScheme init = InitScheme::kZeros;
  std::uint64_t seed = 0;
  // Logits over every vocabulary entry instead of the pattern's candidates.
  bool full_vocabulary = false;

  // Throws InvalidArgument unless epochs >= 0, lr0 > 0, t0 > 0 and both
  // decays lie in (0, 1).
  void validate() const;
  bool operator==(const AttackConfig&) const = default;
};

void to_json(nlohmann::json& j, const AttackConfig& c);
void from_json(const nlohmann::json& j, AttackConfig& c);

// What the adversary knows about the canary: its prefix, the number of
// unknown tokens that follow it, and the labels.
struct CanaryQuery {
  std::vector<std::string> prefix;
  int unknowns = 0;
  std::string intent;
  std::vector<std::string> tags;  // prefix.size() + unknowns entries

  static CanaryQuery from_spec(const data::CanarySpec& spec);
};

// Frozen-model data an attack needs, resolved once per run.
struct AttackContext {
  const training::TrainedModel* model = nullptr;
  std::vector<int> prefix_ids;
  int unknowns = 0;
  int intent = 0;
  std::vector<int> tags;
  data::ReducedVocabulary v0;
  Tensor w0_t;     // d x |V0|: candidate embeddings as columns
  Tensor chars0;   // filters x |V0|: candidate char-CNN outputs (CE only)

  // Throws ContractViolation for labels unknown to the model and
  // InvalidArgument for a malformed query.
  static AttackContext make(const training::TrainedModel& model, const CanaryQuery& query,
                            data::ReducedVocabulary v0);
};

// n x |V0| initial logits. Requires n >= 1 and |V0| >= 2; the gaussian
// scheme draws N(0, 0.01) entries (standard deviation 0.1).
Tensor init_logits(int n, int v0_size, InitScheme scheme, std::uint64_t seed);

// e' = W0^T softmax(z / T) for a single logit vector.
numerics::Vector relax_embed(const numerics::Vector& z, double temperature, const Tensor& w0_t);

// Loss of the frozen model on prefix + relaxed unknowns. `z` must be a node
// on `tape` holding the n x |V0| logits.
numerics::Var attack_loss(numerics::Tape& tape, const AttackContext& ctx, numerics::Var z, double temperature);

// Same loss evaluated without a gradient.
double attack_forward_loss(const AttackContext& ctx, const Tensor& z, double temperature);

// Throws ContractViolation unless `z` is the sole entry of the tape's
// gradient registry.
void verify_attack_registry(const numerics::Tape& tape, numerics::Var z);

struct AttackState {
  Tensor z;
  double temperature = 0.0;
  double learning_rate = 0.0;
  numerics::AdamState adam;
  int epoch = 0;

  AttackState(Tensor initial, const AttackConfig& config);
};

// One epoch: forward at the current T, gradient w.r.t. Z only, one Adam
// step at the current learning rate, then both decay. Returns the loss
// before the update. Throws DivergenceError on a non-finite loss.
double attack_step(AttackState& state, const AttackContext& ctx, const AttackConfig& config);

struct ReconstructionResult {
  std::vector<std::string> tokens;
  std::vector<int> v0_choice;     // index into V0 per position
  Tensor activations;             // n x |V0| final a_i (empty for the baseline)
  double final_loss = 0.0;
  std::vector<double> loss_trace;
  std::vector<int> ties;          // positions whose arg-max was not unique
  double final_temperature = 0.0;
  double final_learning_rate = 0.0;
};

void to_json(nlohmann::json& j, const ReconstructionResult& r);

// Arg-max decode of each row (ties go to the lowest index and are listed).
std::vector<int> decode_rows(const Tensor& activations, std::vector<int>* ties);

ReconstructionResult run_attack(const AttackContext& ctx, const AttackConfig& config);

// Baseline: optimizes free d-dimensional inputs directly and decodes each by
// its Euclidean nearest neighbour among the V0 embeddings. With char
// embeddings enabled the char part of every unknown is held at the mean of
// the V0 char representations. `initial` (d x n) overrides the
// uniform(-0.1, 0.1) start.
ReconstructionResult continuous_baseline_attack(const AttackContext& ctx, const AttackConfig& config,
                                                const std::optional<Tensor>& initial = std::nullopt);

}  // namespace canex::attack
