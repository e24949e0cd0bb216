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

#include <algorithm>
#include <map>
#include <set>

#include "canex/data/canary.hpp"
#include "canex/data/synth.hpp"
#include "canex/data/vocabulary.hpp"
#include "canex/error.hpp"

namespace canex::data {
namespace {

using Strings = std::vector<std::string>;

TEST(Bio, AcceptsWellFormedAndRejectsOrphanInside) {
  EXPECT_FALSE(bio_violation(Strings{"O", "B-city", "I-city", "O"}));
  EXPECT_FALSE(bio_violation(Strings{"B-a", "B-b", "I-b"}));
  EXPECT_TRUE(bio_violation(Strings{"O", "I-city"}));
  EXPECT_TRUE(bio_violation(Strings{"B-date", "I-city"}));
  EXPECT_TRUE(bio_violation(Strings{"X-city"}));
  EXPECT_TRUE(bio_violation(Strings{"B-"}));
}

TEST(Example, ValidateRejectsMismatch) {
  EXPECT_THROW(validate_example({{"a", "b"}, {"O"}, "I"}), InvalidArgument);
  EXPECT_THROW(validate_example({{}, {}, "I"}), InvalidArgument);
  EXPECT_THROW(validate_example({{"a"}, {"O"}, ""}), InvalidArgument);
  EXPECT_NO_THROW(validate_example({{"a"}, {"O"}, "I"}));
}

TEST(LabelSet, SortedUniqueWithIndex) {
  const LabelSet s(Strings{"b", "a", "b"});
  EXPECT_EQ(s.labels(), (Strings{"a", "b"}));
  EXPECT_EQ(s.index("b"), 1);
  EXPECT_THROW(s.index("zzz"), ContractViolation);
}

TEST(Vocabulary, RoundTripAndUnk) {
  const Vocabulary v(Strings{"pin", "my", "code", "my"}, true);
  EXPECT_EQ(v.size(), 4u);
  EXPECT_EQ(v.token(0), Vocabulary::kUnk);
  for (int i = 0; i < static_cast<int>(v.size()); ++i) EXPECT_EQ(v.lookup(v.token(i)), i);
  EXPECT_EQ(v.lookup("absent"), 0);
  const Vocabulary strict(Strings{"a"}, false);
  EXPECT_THROW(strict.lookup("b"), InvalidArgument);
}

TEST(Vocabulary, ReducedSubset) {
  const Vocabulary v(Strings{"one", "two", "three", "hello"}, true);
  const auto r = make_reduced_vocabulary(v, Strings{"two", "one"});
  EXPECT_EQ(r.tokens, (Strings{"two", "one"}));
  EXPECT_EQ(v.token(r.indices[0]), "two");
  EXPECT_THROW(make_reduced_vocabulary(v, Strings{}), InvalidArgument);
  EXPECT_THROW(make_reduced_vocabulary(v, Strings{"one", "one"}), InvalidArgument);
  EXPECT_THROW(make_reduced_vocabulary(v, Strings{"four"}), InvalidArgument);
  const auto full = full_reduced_vocabulary(v);
  EXPECT_EQ(full.size(), 4u);
  EXPECT_EQ(std::count(full.tokens.begin(), full.tokens.end(), Vocabulary::kUnk), 0);
}

TEST(Vocabulary, CharIds) {
  const auto chars = build_char_vocabulary(Strings{"ab", "b"});
  const auto ids = char_ids(chars, "abz");
  ASSERT_EQ(ids.size(), 3u);
  EXPECT_EQ(chars.token(ids[0]), "a");
  EXPECT_EQ(ids[2], 0);  // unknown char -> UNK
}

TEST(Canary, PinPatternMatchesTable) {
  const auto c = generate_canary(CanaryPattern::kPin, 4, 123, 10);
  EXPECT_EQ(c.prefix, (Strings{"my", "pin", "code", "is"}));
  EXPECT_EQ(c.unknowns.size(), 4u);
  EXPECT_EQ(c.tags, (Strings{"O", "O", "O", "O", "B-canary", "I-canary", "I-canary", "I-canary"}));
  EXPECT_EQ(c.intent, "PinIntent");
  for (const auto& u : c.unknowns) {
    EXPECT_NE(std::find(digit_words().begin(), digit_words().end(), u), digit_words().end());
  }
  EXPECT_EQ(c, generate_canary(CanaryPattern::kPin, 4, 123, 10));
}

TEST(Canary, ColorAndCallPatterns) {
  const auto color = generate_canary(CanaryPattern::kColor, 1, 5);
  EXPECT_EQ(color.tags, (Strings{"O", "B-canary"}));
  EXPECT_EQ(color.intent, "ColorIntent");
  EXPECT_EQ(color_names().size(), 12u);
  EXPECT_NE(std::find(color_names().begin(), color_names().end(), color.unknowns[0]), color_names().end());
  const auto call = generate_canary(CanaryPattern::kCall, 3, 5, 1, DigitStyle::kNumerals);
  EXPECT_EQ(call.prefix, Strings{"call"});
  EXPECT_EQ(call.intent, "CallIntent");
  for (const auto& u : call.unknowns) EXPECT_TRUE(u.size() == 1 && u[0] >= '0' && u[0] <= '9');
  EXPECT_THROW(parse_pattern("ssn"), InvalidArgument);
}

TEST(Canary, UnknownsAreUniform) {
  std::map<std::string, int> counts;
  for (std::uint64_t s = 0; s < 2000; ++s) {
    for (const auto& u : generate_canary(CanaryPattern::kPin, 5, s).unknowns) ++counts[u];
  }
  EXPECT_EQ(counts.size(), 10u);
  for (const auto& [tok, n] : counts) EXPECT_NEAR(n, 1000, 5 * 30) << tok;
}

TEST(Canary, SplitRoundsHalfUp) {
  EXPECT_EQ(canary_split(1).train, 1);
  EXPECT_EQ(canary_split(1).val, 0);
  EXPECT_EQ(canary_split(10).train, 9);
  EXPECT_EQ(canary_split(10).val, 1);
  EXPECT_EQ(canary_split(500).train, 450);
  EXPECT_EQ(canary_split(500).val, 50);
  EXPECT_EQ(canary_split(5).train, 5);  // 4.5 rounds up
  EXPECT_EQ(canary_split(100).train, 90);
}

TEST(Canary, InjectionCounts) {
  Corpus base;
  base.train.push_back({{"hi"}, {"O"}, "Greet"});
  base.val.push_back({{"yo"}, {"O"}, "Greet"});
  const auto c = generate_canary(CanaryPattern::kPin, 2, 9, 10);
  const Corpus out = inject_canary(base, c);
  EXPECT_EQ(std::count(out.train.begin(), out.train.end(), c.example()), 9);
  EXPECT_EQ(std::count(out.val.begin(), out.val.end(), c.example()), 1);
  EXPECT_EQ(out.train.size(), 10u);
  const auto tokens = c.tokens();
  EXPECT_EQ(tokens.size(), 6u);
  EXPECT_EQ(c.tags[4], "B-canary");
}

TEST(Synth, DeterministicValidAndRare) {
  const auto cfg = SynthConfig::defaults();
  const auto a = synth_corpus(cfg);
  const auto b = synth_corpus(cfg);
  ASSERT_EQ(a.size(), 2000u);
  EXPECT_EQ(a, b);
  std::map<std::string, int> freq;
  std::size_t total = 0;
  for (const auto& ex : a) {
    EXPECT_NO_THROW(validate_example(ex));
    for (const auto& t : ex.tokens) ++freq[t];
    total += ex.tokens.size();
  }
  for (const auto& w : color_names()) {
    EXPECT_LT(static_cast<double>(freq[w]) / static_cast<double>(total), 0.005) << w;
  }
  for (const auto& w : digit_words()) {
    EXPECT_LT(static_cast<double>(freq[w]) / static_cast<double>(total), 0.005) << w;
  }
  std::set<std::string> intents;
  for (const auto& ex : a) intents.insert(ex.intent);
  EXPECT_EQ(intents.size(), 5u);
  EXPECT_GT(freq.size(), 150u);
  EXPECT_LT(freq.size(), 260u);
}

TEST(Synth, SplitIsDeterministicPartition) {
  const auto ex = synth_corpus(SynthConfig::defaults());
  const Corpus c1 = split_train_val(ex, 0.1, 4);
  const Corpus c2 = split_train_val(ex, 0.1, 4);
  EXPECT_EQ(c1.val.size(), 200u);
  EXPECT_EQ(c1.train.size(), 1800u);
  EXPECT_EQ(c1.val, c2.val);
  EXPECT_NE(split_train_val(ex, 0.1, 5).val, c1.val);
}

}  // namespace
}  // namespace canex::data
