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

#include "canex/numerics/tensor.hpp"

namespace canex::numerics {

// softmax(logits / T), evaluated with max subtraction. Throws
// InvalidArgument when T <= 0 or any logit is non-finite.
Vector softmax_with_temperature(std::span<const double> logits, double temperature);
Vector softmax_with_temperature(const Vector& logits, double temperature);

// log(sum(exp(values))) with max subtraction. Exact for a single element.
// Throws InvalidArgument on empty input.
double log_sum_exp(std::span<const double> values);

}  // namespace canex::numerics
