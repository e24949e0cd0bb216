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

#include "canex/numerics/functions.hpp"

#include <algorithm>
#include <cmath>

#include "canex/error.hpp"

namespace canex::numerics {

Vector softmax_with_temperature(std::span<const double> logits, double temperature) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw InvalidArgument("softmax_with_temperature: temperature must be a positive finite value");
  }
  if (logits.empty()) throw InvalidArgument("softmax_with_temperature: empty logits");
  for (double z : logits) {
    if (!std::isfinite(z)) throw InvalidArgument("softmax_with_temperature: non-finite logit");
  }
  const double m = *std::max_element(logits.begin(), logits.end());
  Vector out(static_cast<Eigen::Index>(logits.size()));
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    const double e = std::exp((logits[i] - m) / temperature);
    out(static_cast<Eigen::Index>(i)) = e;
    total += e;
  }
  return out / total;
}

Vector softmax_with_temperature(const Vector& logits, double temperature) {
  return softmax_with_temperature(std::span<const double>(logits.data(), logits.size()),
                                  temperature);
}

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("log_sum_exp: empty input");
  if (values.size() == 1) return values[0];
  const double m = *std::max_element(values.begin(), values.end());
  if (std::isinf(m)) return m;
  double total = 0.0;
  for (double v : values) total += std::exp(v - m);
  return m + std::log(total);
}

}  // namespace canex::numerics
