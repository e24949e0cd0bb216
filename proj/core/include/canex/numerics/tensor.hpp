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

#include <Eigen/Core>

namespace canex::numerics {

// Dense row-major-agnostic 2-D tensor of doubles. Sequences are stored one
// position per column, so an (in_dim x L) tensor is a length-L sequence.
using Tensor = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline bool all_finite(const Tensor& t) { return t.allFinite(); }

}  // namespace canex::numerics
