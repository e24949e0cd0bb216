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

#include "canex/data/vocabulary.hpp"

#include <algorithm>
#include <set>

#include "canex/error.hpp"

namespace canex::data {

Vocabulary::Vocabulary(std::vector<std::string> tokens, bool with_unk) : has_unk_(with_unk) {
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  tokens.erase(std::remove(tokens.begin(), tokens.end(), std::string(kUnk)), tokens.end());
  if (with_unk) tokens_.push_back(kUnk);
  tokens_.insert(tokens_.end(), tokens.begin(), tokens.end());
  reindex();
}

Vocabulary Vocabulary::from_ordered(std::vector<std::string> ordered, bool with_unk) {
  Vocabulary v;
  v.has_unk_ = with_unk;
  v.tokens_ = std::move(ordered);
  if (with_unk && (v.tokens_.empty() || v.tokens_.front() != kUnk)) {
    throw ParseError("vocabulary with UNK must list it first");
  }
  v.reindex();
  if (v.index_.size() != v.tokens_.size()) throw ParseError("vocabulary contains duplicate tokens");
  return v;
}

void Vocabulary::reindex() {
  index_.clear();
  for (std::size_t i = 0; i < tokens_.size(); ++i) index_.emplace(tokens_[i], static_cast<int>(i));
}

const std::string& Vocabulary::token(int index) const {
  if (index < 0 || static_cast<std::size_t>(index) >= tokens_.size()) {
    throw ContractViolation("vocabulary index " + std::to_string(index) + " out of range");
  }
  return tokens_[static_cast<std::size_t>(index)];
}

std::optional<int> Vocabulary::find(const std::string& token) const {
  const auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int Vocabulary::lookup(const std::string& token) const {
  if (auto i = find(token)) return *i;
  if (has_unk_) return 0;
  throw InvalidArgument("unknown token '" + token + "' and no UNK entry configured");
}

std::vector<int> Vocabulary::lookup_all(std::span<const std::string> tokens) const {
  std::vector<int> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(lookup(t));
  return out;
}

Vocabulary build_vocabulary(std::span<const LabeledExample> train, std::span<const LabeledExample> val,
                            std::span<const std::string> extra) {
  std::vector<std::string> tokens(extra.begin(), extra.end());
  for (const auto& e : train) tokens.insert(tokens.end(), e.tokens.begin(), e.tokens.end());
  for (const auto& e : val) tokens.insert(tokens.end(), e.tokens.begin(), e.tokens.end());
  return Vocabulary(std::move(tokens), true);
}

Vocabulary build_char_vocabulary(std::span<const std::string> words) {
  std::set<char> chars;
  for (const auto& w : words) chars.insert(w.begin(), w.end());
  std::vector<std::string> tokens;
  for (char c : chars) tokens.emplace_back(1, c);
  return Vocabulary(std::move(tokens), true);
}

std::vector<int> char_ids(const Vocabulary& chars, const std::string& word) {
  std::vector<int> out;
  out.reserve(word.size());
  for (char c : word) out.push_back(chars.lookup(std::string(1, c)));
  return out;
}

ReducedVocabulary make_reduced_vocabulary(const Vocabulary& vocab, std::span<const std::string> tokens) {
  if (tokens.empty()) throw InvalidArgument("reduced vocabulary must not be empty");
  ReducedVocabulary out;
  std::set<std::string> seen;
  for (const auto& t : tokens) {
    if (!seen.insert(t).second) throw InvalidArgument("reduced vocabulary repeats token '" + t + "'");
    const auto idx = vocab.find(t);
    if (!idx || (vocab.has_unk() && *idx == 0)) {
      throw InvalidArgument("candidate token '" + t + "' is not in the model vocabulary");
    }
    out.indices.push_back(*idx);
    out.tokens.push_back(t);
  }
  return out;
}

ReducedVocabulary full_reduced_vocabulary(const Vocabulary& vocab) {
  ReducedVocabulary out;
  for (std::size_t i = vocab.has_unk() ? 1 : 0; i < vocab.size(); ++i) {
    out.indices.push_back(static_cast<int>(i));
    out.tokens.push_back(vocab.tokens()[i]);
  }
  if (out.indices.empty()) throw InvalidArgument("vocabulary has no candidate tokens");
  return out;
}

}  // namespace canex::data
