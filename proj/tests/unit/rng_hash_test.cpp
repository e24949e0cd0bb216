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
#include <set>

#include "canex/error.hpp"
#include "canex/numerics/hash.hpp"
#include "canex/numerics/rng.hpp"

namespace canex::numerics {
namespace {

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, SplitStreamsAreIndependentAndStable) {
  const Rng root(9);
  Rng x = root.split("init");
  Rng y = root.split("init");
  Rng z = root.split("dropout");
  EXPECT_EQ(x.next_u64(), y.next_u64());
  EXPECT_NE(root.split("init").next_u64(), z.next_u64());
}

TEST(Rng, UniformIndexCoversRangeEvenly) {
  Rng rng(3);
  std::vector<int> counts(10, 0);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) ++counts[rng.uniform_index(10)];
  for (int c : counts) EXPECT_NEAR(c, draws / 10, 5 * std::sqrt(draws * 0.09));
  EXPECT_THROW(rng.uniform_index(0), InvalidArgument);
}

TEST(Rng, NormalMoments) {
  Rng rng(4);
  double s = 0, s2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal(1.0, 2.0);
    s += x;
    s2 += x * x;
  }
  const double mean = s / n;
  EXPECT_NEAR(mean, 1.0, 0.03);
  EXPECT_NEAR(s2 / n - mean * mean, 4.0, 0.1);
}

TEST(Rng, Uniform01InHalfOpenInterval) {
  Rng rng(5);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Sha256, KnownVectors) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Sha256, IncrementalEqualsOneShot) {
  Sha256 h;
  h.update(std::string_view("ab"));
  h.update(std::string_view("c"));
  EXPECT_EQ(h.finish_hex(), sha256_hex("abc"));
}

TEST(SeedFrom, LengthPrefixingSeparatesParts) {
  EXPECT_NE(seed_from({"ab", "c"}), seed_from({"a", "bc"}));
  EXPECT_EQ(seed_from({"pin", "4"}), seed_from({"pin", "4"}));
}

}  // namespace
}  // namespace canex::numerics
