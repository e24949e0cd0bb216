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

#include "canex/data/example.hpp"

#include <algorithm>

#include "canex/error.hpp"

namespace canex::data {

std::optional<std::string> bio_violation(std::span<const std::string> tags) {
  std::string open_type;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    const std::string& tag = tags[i];
    if (tag == "O") {
      open_type.clear();
      continue;
    }
    if (tag.size() < 3 || tag[1] != '-' || (tag[0] != 'B' && tag[0] != 'I')) {
      return "tag '" + tag + "' at position " + std::to_string(i) + " is not O, B-x or I-x";
    }
    const std::string type = tag.substr(2);
    if (tag[0] == 'I' && type != open_type) {
      return "tag '" + tag + "' at position " + std::to_string(i) +
             " does not continue a B-/I- span of the same type";
    }
    open_type = type;
  }
  return std::nullopt;
}

void validate_example(const LabeledExample& example) {
  if (example.tokens.empty()) throw InvalidArgument("example has no tokens");
  if (example.tokens.size() != example.ner_tags.size()) {
    throw InvalidArgument("example has " + std::to_string(example.tokens.size()) + " tokens but " +
                          std::to_string(example.ner_tags.size()) + " tags");
  }
  if (example.intent.empty()) throw InvalidArgument("example has an empty intent");
  for (const auto& t : example.tokens) {
    if (t.empty()) throw InvalidArgument("example contains an empty token");
  }
  if (auto err = bio_violation(example.ner_tags)) throw InvalidArgument("malformed BIO: " + *err);
}

LabelSet::LabelSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
  std::sort(labels_.begin(), labels_.end());
  labels_.erase(std::unique(labels_.begin(), labels_.end()), labels_.end());
}

const std::string& LabelSet::label(int index) const {
  if (index < 0 || static_cast<std::size_t>(index) >= labels_.size()) {
    throw ContractViolation("label index " + std::to_string(index) + " out of range");
  }
  return labels_[static_cast<std::size_t>(index)];
}

std::optional<int> LabelSet::find(const std::string& label) const {
  const auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
  if (it == labels_.end() || *it != label) return std::nullopt;
  return static_cast<int>(it - labels_.begin());
}

int LabelSet::index(const std::string& label) const {
  if (auto i = find(label)) return *i;
  throw ContractViolation("unknown label '" + label + "'");
}

LabelSet collect_intents(std::span<const LabeledExample> a, std::span<const LabeledExample> b) {
  std::vector<std::string> out;
  for (const auto& e : a) out.push_back(e.intent);
  for (const auto& e : b) out.push_back(e.intent);
  return LabelSet(std::move(out));
}

LabelSet collect_tags(std::span<const LabeledExample> a, std::span<const LabeledExample> b) {
  std::vector<std::string> out;
  for (const auto& e : a) out.insert(out.end(), e.ner_tags.begin(), e.ner_tags.end());
  for (const auto& e : b) out.insert(out.end(), e.ner_tags.begin(), e.ner_tags.end());
  return LabelSet(std::move(out));
}

}  // namespace canex::data
