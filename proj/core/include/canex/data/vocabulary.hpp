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
#include <unordered_map>
#include <vector>

#include "canex/data/example.hpp"

namespace canex::data {

// Token <-> index map. When built with an UNK entry it sits at index 0 and
// unknown lookups resolve to it; otherwise they throw.
class Vocabulary {
 public:
  static constexpr const char* kUnk = "<unk>";

  Vocabulary() = default;
  // `tokens` are de-duplicated and sorted; UNK is prepended when requested.
  Vocabulary(std::vector<std::string> tokens, bool with_unk);

  static Vocabulary from_ordered(std::vector<std::string> ordered, bool with_unk);

  std::size_t size() const { return tokens_.size(); }
  bool has_unk() const { return has_unk_; }
  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::string& token(int index) const;
  std::optional<int> find(const std::string& token) const;
  // Index of `token`, UNK when absent. Throws InvalidArgument when absent and
  // the vocabulary has no UNK entry.
  int lookup(const std::string& token) const;
  std::vector<int> lookup_all(std::span<const std::string> tokens) const;

  bool operator==(const Vocabulary& other) const { return tokens_ == other.tokens_ && has_unk_ == other.has_unk_; }

 private:
  void reindex();

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
  bool has_unk_ = false;
};

// Every token of the examples plus `extra`.
Vocabulary build_vocabulary(std::span<const LabeledExample> train, std::span<const LabeledExample> val,
                            std::span<const std::string> extra);

// Single-character vocabulary over the bytes of `words`, with UNK.
Vocabulary build_char_vocabulary(std::span<const std::string> words);

// Character ids of `word` under `chars`.
std::vector<int> char_ids(const Vocabulary& chars, const std::string& word);

// Ordered candidate subset V0 of a vocabulary.
struct ReducedVocabulary {
  std::vector<int> indices;
  std::vector<std::string> tokens;

  std::size_t size() const { return indices.size(); }
};

// Throws InvalidArgument when `tokens` is empty, has duplicates, or names a
// token outside `vocab`.
ReducedVocabulary make_reduced_vocabulary(const Vocabulary& vocab, std::span<const std::string> tokens);

// All non-special tokens of `vocab` in index order.
ReducedVocabulary full_reduced_vocabulary(const Vocabulary& vocab);

}  // namespace canex::data
