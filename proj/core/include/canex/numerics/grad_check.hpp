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

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "canex/numerics/tape.hpp"

namespace canex::numerics {

struct GradCheckReport {
  double max_relative_error = 0.0;
  double max_absolute_error = 0.0;
  std::size_t worst_tensor = 0;
  Eigen::Index worst_row = 0;
  Eigen::Index worst_col = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t coordinates_checked = 0;
  bool passed = false;
};

struct GradCheckOptions {
  double step = 1e-5;
  double tolerance = 1e-4;
  // Denominator floor for the relative error |a - f| / max(|a|, |f|, floor).
  double relative_floor = 1e-6;
};

// Builds a scalar loss on `tape` from the supplied leaves. The leaves are
// registered parameters when the analytic gradient is taken and constants
// during finite differencing.
using LossBuilder = std::function<Var(Tape& tape, std::span<const Var> leaves)>;

// Compares tape gradients against central differences
// (L(p + h) - L(p - h)) / 2h for every coordinate of every tensor in
// `params`. Throws InvalidArgument when two evaluations at the same point
// disagree (stochastic loss, e.g. dropout left on).
GradCheckReport gradient_check(const LossBuilder& loss, std::vector<Tensor> params,
                               const GradCheckOptions& options = {});

}  // namespace canex::numerics
