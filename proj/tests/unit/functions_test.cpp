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
#include <limits>
#include <vector>

#include "canex/error.hpp"
#include "canex/numerics/functions.hpp"

namespace canex::numerics {
namespace {

TEST(Softmax, KnownValuesAtUnitTemperature) {
  const std::vector<double> z{2.0, 1.0, 0.0};
  const Vector a = softmax_with_temperature(z, 1.0);
  EXPECT_NEAR(a(0), 0.66524, 1e-5);
  EXPECT_NEAR(a(1), 0.24473, 1e-5);
  EXPECT_NEAR(a(2), 0.09003, 1e-5);
}

TEST(Softmax, SumsToOneAndSharpensWithLowTemperature) {
  const std::vector<double> z{0.3, 0.1, -0.4, 0.25};
  for (double t : {10.0, 1.0, 0.1, 0.01}) {
    EXPECT_NEAR(softmax_with_temperature(z, t).sum(), 1.0, 1e-12);
  }
  EXPECT_GT(softmax_with_temperature(z, 0.01)(0), 0.99);
  const Vector flat = softmax_with_temperature(z, 1e6);
  EXPECT_NEAR(flat.maxCoeff() - flat.minCoeff(), 0.0, 1e-6);
}

TEST(Softmax, ShiftInvariant) {
  const Vector z = (Vector(4) << 0.5, -1.0, 2.0, 0.0).finished();
  const Vector shifted = (z.array() + 1234.5).matrix();
  EXPECT_LT((softmax_with_temperature(z, 0.3) - softmax_with_temperature(shifted, 0.3)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Softmax, StableForHugeLogits) {
  const std::vector<double> z{1000.0, 999.0};
  const Vector a = softmax_with_temperature(z, 1.0);
  EXPECT_TRUE(a.allFinite());
  EXPECT_NEAR(a(0), 1.0 / (1.0 + std::exp(-1.0)), 1e-12);
}

TEST(Softmax, RejectsBadInput) {
  const std::vector<double> z{1.0, 2.0};
  EXPECT_THROW(softmax_with_temperature(z, 0.0), InvalidArgument);
  EXPECT_THROW(softmax_with_temperature(z, -0.5), InvalidArgument);
  EXPECT_THROW(softmax_with_temperature(std::vector<double>{}, 1.0), InvalidArgument);
  const std::vector<double> bad{1.0, std::numeric_limits<double>::quiet_NaN()};
  EXPECT_THROW(softmax_with_temperature(bad, 1.0), InvalidArgument);
  const std::vector<double> inf{1.0, std::numeric_limits<double>::infinity()};
  EXPECT_THROW(softmax_with_temperature(inf, 1.0), InvalidArgument);
}

TEST(LogSumExp, MatchesDirectEvaluation) {
  const std::vector<double> v{0.1, -2.0, 3.5};
  EXPECT_NEAR(log_sum_exp(v), std::log(std::exp(0.1) + std::exp(-2.0) + std::exp(3.5)), 1e-13);
}

TEST(LogSumExp, ExactForSingleElementAndStableForLargeValues) {
  const std::vector<double> one{-7.25};
  EXPECT_EQ(log_sum_exp(one), -7.25);
  const std::vector<double> big{1000.0, 1000.0};
  EXPECT_NEAR(log_sum_exp(big), 1000.0 + std::log(2.0), 1e-12);
  EXPECT_THROW(log_sum_exp(std::vector<double>{}), InvalidArgument);
}

}  // namespace
}  // namespace canex::numerics
