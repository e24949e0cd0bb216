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

#include "canex/numerics/grad_check.hpp"

#include <algorithm>
#include <cmath>

#include "canex/error.hpp"

namespace canex::numerics {
namespace {

double evaluate(const LossBuilder& loss, const std::vector<Tensor>& params) {
  Tape tape;
  std::vector<Var> leaves;
  leaves.reserve(params.size());
  for (const Tensor& p : params) leaves.push_back(tape.constant_ref(p));
  const Var out = loss(tape, leaves);
  if (out.rows() != 1 || out.cols() != 1) throw ContractViolation("gradient_check: loss not scalar");
  return out.scalar();
}

}  // namespace

GradCheckReport gradient_check(const LossBuilder& loss, std::vector<Tensor> params,
                               const GradCheckOptions& options) {
  if (!(options.step > 0.0)) throw InvalidArgument("gradient_check: step must be > 0");

  const double base = evaluate(loss, params);
  if (evaluate(loss, params) != base) {
    throw InvalidArgument("gradient_check: loss is not deterministic (disable dropout)");
  }

  std::vector<Tensor> analytic;
  {
    Tape tape;
    std::vector<Var> leaves;
    for (const Tensor& p : params) leaves.push_back(tape.parameter_ref(p));
    const Var out = loss(tape, leaves);
    tape.backward(out);
    for (const Var& leaf : leaves) analytic.push_back(leaf.grad());
  }

  GradCheckReport report;
  for (std::size_t k = 0; k < params.size(); ++k) {
    Tensor& p = params[k];
    for (Eigen::Index c = 0; c < p.cols(); ++c) {
      for (Eigen::Index r = 0; r < p.rows(); ++r) {
        const double saved = p(r, c);
        p(r, c) = saved + options.step;
        const double plus = evaluate(loss, params);
        p(r, c) = saved - options.step;
        const double minus = evaluate(loss, params);
        p(r, c) = saved;

        const double numeric = (plus - minus) / (2.0 * options.step);
        const double a = analytic[k](r, c);
        const double abs_err = std::abs(a - numeric);
        const double denom = std::max({std::abs(a), std::abs(numeric), options.relative_floor});
        const double rel_err = abs_err / denom;
        ++report.coordinates_checked;
        report.max_absolute_error = std::max(report.max_absolute_error, abs_err);
        if (rel_err > report.max_relative_error || !std::isfinite(rel_err)) {
          report.max_relative_error = rel_err;
          report.worst_tensor = k;
          report.worst_row = r;
          report.worst_col = c;
          report.worst_analytic = a;
          report.worst_numeric = numeric;
        }
      }
    }
  }
  report.passed = std::isfinite(report.max_relative_error) &&
                  report.max_relative_error < options.tolerance;
  return report;
}

}  // namespace canex::numerics
