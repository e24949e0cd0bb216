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

#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "canex/data/example.hpp"
#include "canex/error.hpp"

namespace canex::data {

class EmptyCorpusError : public ParseError {
 public:
  using ParseError::ParseError;
};

struct LoadedCorpus {
  std::vector<LabeledExample> examples;
  LabelSet intents;
  LabelSet tags;
};

// JSON-lines corpus: one object per line with keys "tokens", "ner_tags"
// (string arrays of equal length) and "intent". Blank lines are skipped.
// Errors carry `source` and the 1-based line number.
LoadedCorpus parse_corpus(std::istream& in, const std::string& source);
LoadedCorpus load_corpus(const std::filesystem::path& path);

std::string to_json_line(const LabeledExample& example);
void write_corpus(std::ostream& out, std::span<const LabeledExample> examples);
void save_corpus(const std::filesystem::path& path, std::span<const LabeledExample> examples);

}  // namespace canex::data
