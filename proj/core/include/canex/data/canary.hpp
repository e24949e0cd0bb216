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
#include <string>
#include <string_view>
#include <vector>

#include "canex/data/example.hpp"

namespace canex::data {

enum class CanaryPattern { kCall, kPin, kColor };

// Whether digit tokens are spelled ("seven") or numerals ("7").
enum class DigitStyle { kWords, kNumerals };

std::string to_string(CanaryPattern pattern);
// Throws InvalidArgument for anything but "call", "pin", "color".
CanaryPattern parse_pattern(std::string_view name);

const std::vector<std::string>& digit_words();     // zero .. nine
const std::vector<std::string>& digit_numerals();  // "0" .. "9"
const std::vector<std::string>& color_names();     // the 12 candidate colors

// Token set the unknowns of `pattern` are drawn from; also the default V0.
const std::vector<std::string>& candidate_tokens(CanaryPattern pattern, DigitStyle style);
const std::vector<std::string>& canary_prefix(CanaryPattern pattern);
std::string canary_intent(CanaryPattern pattern);
// "O" for each prefix token, then "B-canary" and n-1 "I-canary".
std::vector<std::string> canary_tags(std::size_t prefix_length, std::size_t n);

struct CanarySpec {
  CanaryPattern pattern = CanaryPattern::kPin;
  std::vector<std::string> prefix;
  std::vector<std::string> unknowns;
  std::string intent;
  std::vector<std::string> tags;
  int repetitions = 1;
  std::uint64_t seed = 0;

  std::vector<std::string> tokens() const;
  LabeledExample example() const;
  bool operator==(const CanarySpec&) const = default;
};

// Unknown tokens drawn i.i.d. uniformly from the pattern's token set.
CanarySpec generate_canary(CanaryPattern pattern, int n, std::uint64_t seed, int repetitions = 1,
                           DigitStyle style = DigitStyle::kWords);

struct CanarySplit {
  int train = 0;
  int val = 0;
};

// round(0.9 R) train copies (halves round up), the rest to validation.
CanarySplit canary_split(int repetitions);

// Appends the canary copies to both splits.
Corpus inject_canary(Corpus corpus, const CanarySpec& spec);

}  // namespace canex::data
