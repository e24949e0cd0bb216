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
#include <span>
#include <vector>

#include "canex/numerics/tensor.hpp"

namespace canex::numerics {

struct AdamHyper {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Adam with bias correction. One first/second moment pair per parameter
// tensor; moments start at zero and `step` counts completed updates.
class AdamState {
 public:
  AdamState() = default;
  AdamState(std::span<const Tensor* const> shapes, AdamHyper hyper);

  const AdamHyper& hyper() const { return hyper_; }
  void set_learning_rate(double lr) { hyper_.learning_rate = lr; }
  std::int64_t step() const { return step_; }
  const std::vector<Tensor>& first_moments() const { return m_; }
  const std::vector<Tensor>& second_moments() const { return v_; }

  // Updates `params` in place from `grads`. Shapes must match the ones the
  // state was built with; otherwise ContractViolation.
  void apply(std::span<Tensor* const> params, std::span<const Tensor* const> grads);

 private:
  AdamHyper hyper_;
  std::int64_t step_ = 0;
  std::vector<Tensor> m_;
  std::vector<Tensor> v_;
};

}  // namespace canex::numerics
