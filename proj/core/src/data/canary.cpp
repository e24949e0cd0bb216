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

#include "canex/data/canary.hpp"

#include "canex/error.hpp"
#include "canex/numerics/rng.hpp"

namespace canex::data {

std::string to_string(CanaryPattern pattern) {
  switch (pattern) {
    case CanaryPattern::kCall: return "call";
    case CanaryPattern::kPin: return "pin";
    case CanaryPattern::kColor: return "color";
  }
  return "?";
}

CanaryPattern parse_pattern(std::string_view name) {
  if (name == "call") return CanaryPattern::kCall;
  if (name == "pin") return CanaryPattern::kPin;
  if (name == "color") return CanaryPattern::kColor;
  throw InvalidArgument("unknown canary pattern '" + std::string(name) + "'");
}

const std::vector<std::string>& digit_words() {
  static const std::vector<std::string> kWords = {"zero", "one", "two",   "three", "four",
                                                  "five", "six", "seven", "eight", "nine"};
  return kWords;
}

const std::vector<std::string>& digit_numerals() {
  static const std::vector<std::string> kNumerals = {"0", "1", "2", "3", "4",
                                                     "5", "6", "7", "8", "9"};
  return kNumerals;
}

const std::vector<std::string>& color_names() {
  static const std::vector<std::string> kColors = {"red",  "green",   "lilac",  "blue",
                                                   "yellow", "brown", "cyan",   "magenta",
                                                   "orange", "pink",  "purple", "mauve"};
  return kColors;
}

const std::vector<std::string>& candidate_tokens(CanaryPattern pattern, DigitStyle style) {
  if (pattern == CanaryPattern::kColor) return color_names();
  return style == DigitStyle::kWords ? digit_words() : digit_numerals();
}

const std::vector<std::string>& canary_prefix(CanaryPattern pattern) {
  static const std::vector<std::string> kCall = {"call"};
  static const std::vector<std::string> kPin = {"my", "pin", "code", "is"};
  static const std::vector<std::string> kColor = {"color"};
  switch (pattern) {
    case CanaryPattern::kCall: return kCall;
    case CanaryPattern::kPin: return kPin;
    case CanaryPattern::kColor: return kColor;
  }
  return kPin;
}

std::string canary_intent(CanaryPattern pattern) {
  switch (pattern) {
    case CanaryPattern::kCall: return "CallIntent";
    case CanaryPattern::kPin: return "PinIntent";
    case CanaryPattern::kColor: return "ColorIntent";
  }
  return "";
}

std::vector<std::string> canary_tags(std::size_t prefix_length, std::size_t n) {
  std::vector<std::string> tags(prefix_length, "O");
  for (std::size_t i = 0; i < n; ++i) tags.push_back(i == 0 ? "B-canary" : "I-canary");
  return tags;
}

std::vector<std::string> CanarySpec::tokens() const {
  std::vector<std::string> out = prefix;
  out.insert(out.end(), unknowns.begin(), unknowns.end());
  return out;
}

LabeledExample CanarySpec::example() const { return {tokens(), tags, intent}; }

CanarySpec generate_canary(CanaryPattern pattern, int n, std::uint64_t seed, int repetitions,
                           DigitStyle style) {
  if (n < 1) throw InvalidArgument("canary length n must be >= 1");
  if (repetitions < 1) throw InvalidArgument("canary repetitions must be >= 1");
  CanarySpec spec;
  spec.pattern = pattern;
  spec.prefix = canary_prefix(pattern);
  spec.intent = canary_intent(pattern);
  spec.tags = canary_tags(spec.prefix.size(), static_cast<std::size_t>(n));
  spec.repetitions = repetitions;
  spec.seed = seed;
  const auto& pool = candidate_tokens(pattern, style);
  numerics::Rng rng(seed);
  for (int i = 0; i < n; ++i) spec.unknowns.push_back(pool[rng.uniform_index(pool.size())]);
  return spec;
}

CanarySplit canary_split(int repetitions) {
  if (repetitions < 1) throw InvalidArgument("canary repetitions must be >= 1");
  const int train = (9 * repetitions + 5) / 10;
  return {train, repetitions - train};
}

Corpus inject_canary(Corpus corpus, const CanarySpec& spec) {
  const CanarySplit split = canary_split(spec.repetitions);
  const LabeledExample ex = spec.example();
  validate_example(ex);
  corpus.train.insert(corpus.train.end(), static_cast<std::size_t>(split.train), ex);
  corpus.val.insert(corpus.val.end(), static_cast<std::size_t>(split.val), ex);
  return corpus;
}

}  // namespace canex::data
