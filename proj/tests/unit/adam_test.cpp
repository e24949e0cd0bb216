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

#include <gtest/gtest.h>

#include <cmath>

#include "canex/error.hpp"
#include "canex/numerics/adam.hpp"

namespace canex::numerics {
namespace {

TEST(Adam, FirstStepMovesByLearningRate) {
  // With bias correction the first update is lr * g / (|g| + eps') = lr.
  Tensor p = Tensor::Constant(1, 1, 1.0);
  const Tensor g = Tensor::Constant(1, 1, 0.5);
  const Tensor* shape = &p;
  AdamState adam(std::span(&shape, 1), {.learning_rate = 0.1});
  Tensor* pp = &p;
  const Tensor* gp = &g;
  adam.apply(std::span(&pp, 1), std::span(&gp, 1));
  EXPECT_NEAR(p(0, 0), 0.9, 1e-7);
  EXPECT_EQ(adam.step(), 1);
}

TEST(Adam, MomentsFollowRecurrence) {
  Tensor p = Tensor::Zero(1, 2);
  const Tensor* shape = &p;
  AdamState adam(std::span(&shape, 1), {.learning_rate = 0.01});
  Tensor* pp = &p;
  double m = 0.0, v = 0.0, x = 0.0;
  for (int t = 1; t <= 5; ++t) {
    const double grad = 2.0 * (x - 3.0);
    Tensor g = Tensor::Constant(1, 2, grad);
    const Tensor* gp = &g;
    adam.apply(std::span(&pp, 1), std::span(&gp, 1));
    m = 0.9 * m + 0.1 * grad;
    v = 0.999 * v + 0.001 * grad * grad;
    x -= 0.01 * (m / (1 - std::pow(0.9, t))) / (std::sqrt(v / (1 - std::pow(0.999, t))) + 1e-8);
    EXPECT_NEAR(p(0, 1), x, 1e-14);
    EXPECT_NEAR(adam.first_moments()[0](0, 0), m, 1e-14);
    EXPECT_NEAR(adam.second_moments()[0](0, 0), v, 1e-14);
  }
}

TEST(Adam, MinimizesQuadratic) {
  Tensor p = Tensor::Constant(2, 1, 5.0);
  const Tensor* shape = &p;
  AdamState adam(std::span(&shape, 1), {.learning_rate = 0.05});
  Tensor* pp = &p;
  for (int i = 0; i < 2000; ++i) {
    Tensor g = 2.0 * p;
    const Tensor* gp = &g;
    adam.apply(std::span(&pp, 1), std::span(&gp, 1));
  }
  EXPECT_LT(p.norm(), 1e-2);
}

TEST(Adam, ShapeMismatchIsContractViolation) {
  Tensor p = Tensor::Zero(2, 2);
  const Tensor* shape = &p;
  AdamState adam(std::span(&shape, 1), {});
  Tensor wrong = Tensor::Zero(3, 1);
  Tensor* wp = &wrong;
  const Tensor g = Tensor::Zero(3, 1);
  const Tensor* gp = &g;
  EXPECT_THROW(adam.apply(std::span(&wp, 1), std::span(&gp, 1)), ContractViolation);
}

TEST(Adam, LeavesNegativeInfinityEntriesUntouched) {
  Tensor p(1, 2);
  p << -std::numeric_limits<double>::infinity(), 1.0;
  const Tensor* shape = &p;
  AdamState adam(std::span(&shape, 1), {.learning_rate = 0.1});
  Tensor* pp = &p;
  Tensor g(1, 2);
  g << 0.0, 1.0;
  const Tensor* gp = &g;
  adam.apply(std::span(&pp, 1), std::span(&gp, 1));
  EXPECT_TRUE(std::isinf(p(0, 0)) && p(0, 0) < 0);
  EXPECT_NEAR(p(0, 1), 0.9, 1e-7);
}

}  // namespace
}  // namespace canex::numerics
