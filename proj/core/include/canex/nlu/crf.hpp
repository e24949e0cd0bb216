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

#include <span>
#include <vector>

#include "canex/numerics/tape.hpp"
#include "canex/numerics/tensor.hpp"

// Linear-chain CRF with explicit BOS/EOS states.
//
// Emissions are (tags x L), one column per position. Transitions are
// (tags + 2) x (tags + 2), indexed [from][to], with BOS = tags and
// EOS = tags + 1. A path t_1..t_L scores
//   T[BOS][t_1] + sum_i E[t_i][i] + sum_i T[t_i][t_{i+1}] + T[t_L][EOS].
namespace canex::nlu {

using numerics::Tensor;

inline int crf_bos(int tag_count) { return tag_count; }
inline int crf_eos(int tag_count) { return tag_count + 1; }

// Sets transitions into BOS and out of EOS to -inf.
void mask_transitions(Tensor& transitions, int tag_count);

double crf_path_score(const Tensor& emissions, const Tensor& transitions, std::span<const int> tags);

// log Z via the forward algorithm in log space.
double crf_log_partition(const Tensor& emissions, const Tensor& transitions);

// log Z - score(gold). Throws ContractViolation on bad shapes or tags.
double crf_negative_log_likelihood(const Tensor& emissions, const Tensor& transitions,
                                   std::span<const int> tags);

struct ViterbiResult {
  std::vector<int> tags;
  double score = 0.0;
};

// Highest-scoring path; ties resolve to the lowest tag index.
ViterbiResult crf_viterbi_decode(const Tensor& emissions, const Tensor& transitions);

// Differentiable NLL on a tape (1x1). Gradients are node marginals minus
// gold indicators for emissions, and edge marginals minus gold counts for
// transitions; masked entries receive zero.
numerics::Var crf_nll(numerics::Var emissions, numerics::Var transitions, std::span<const int> tags);

}  // namespace canex::nlu
