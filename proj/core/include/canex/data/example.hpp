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

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace canex::data {

// One tokenized utterance with per-token BIO tags and an intent label.
struct LabeledExample {
  std::vector<std::string> tokens;
  std::vector<std::string> ner_tags;
  std::string intent;

  bool operator==(const LabeledExample&) const = default;
};

struct Corpus {
  std::vector<LabeledExample> train;
  std::vector<LabeledExample> val;
};

// Description of the first BIO violation, if any: I-X must follow B-X or
// I-X, and every tag is O, B-<type> or I-<type>.
std::optional<std::string> bio_violation(std::span<const std::string> tags);

// Throws InvalidArgument on empty tokens, length mismatch, empty intent or
// malformed BIO.
void validate_example(const LabeledExample& example);

// Sorted, de-duplicated label inventory with index lookup.
class LabelSet {
 public:
  LabelSet() = default;
  explicit LabelSet(std::vector<std::string> labels);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(int index) const;
  std::optional<int> find(const std::string& label) const;
  // Throws ContractViolation for an unknown label.
  int index(const std::string& label) const;

  bool operator==(const LabelSet&) const = default;

 private:
  std::vector<std::string> labels_;
};

LabelSet collect_intents(std::span<const LabeledExample> a, std::span<const LabeledExample> b = {});
LabelSet collect_tags(std::span<const LabeledExample> a, std::span<const LabeledExample> b = {});

}  // namespace canex::data
