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

// Differentiable operations over Tape variables. Every op is shape-checked
// and throws ContractViolation on mismatch.
namespace canex::numerics {

Var matmul(Var a, Var b);
Var transpose(Var a);
Var add(Var a, Var b);
Var sub(Var a, Var b);
// a (r x c) + bias (r x 1) broadcast over columns.
Var add_bias(Var a, Var bias);
Var scale(Var a, double factor);
Var hadamard(Var a, Var b);
Var sigmoid(Var a);
Var tanh(Var a);
Var sum_all(Var a);

Var concat_rows(const std::vector<Var>& parts);
Var concat_cols(const std::vector<Var>& parts);
Var slice_rows(Var a, Eigen::Index start, Eigen::Index count);
Var slice_cols(Var a, Eigen::Index start, Eigen::Index count);

// Rows of `table` (N x d) selected by `indices`, laid out as columns: d x L.
Var gather_rows_as_cols(Var table, std::span<const int> indices);

// Zero-padded sliding windows: input (c x L) -> (c*width x L); column t
// stacks input columns t-left .. t-left+width-1, with left = (width-1)/2.
Var unfold_windows(Var a, int width);

// Per-row maximum over columns: (r x c) -> (r x 1). Gradient flows to the
// first maximal column.
Var rowwise_max(Var a);

// Row-wise softmax of a / temperature.
Var softmax_rows(Var logits, double temperature);

// Softmax cross-entropy of a column of logits against `label`; 1x1 result.
Var cross_entropy(Var logits, int label);

// One direction of an LSTM over a sequence. `input_proj` (4H x L) already
// holds W_x x_t + b for every position, gate blocks ordered i, f, g, o.
// `recurrent` is W_h (4H x H). Returns hidden states (H x L); when `reverse`
// the recurrence runs from the last column to the first.
Var lstm_sequence(Var input_proj, Var recurrent, bool reverse);

}  // namespace canex::numerics
