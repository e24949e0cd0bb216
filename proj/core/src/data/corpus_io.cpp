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

#include "canex/data/corpus_io.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace canex::data {
namespace {

using nlohmann::json;

std::vector<std::string> string_array(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw InvalidArgument(std::string("missing string array '") + key + "'");
  }
  std::vector<std::string> out;
  for (const auto& item : j.at(key)) {
    if (!item.is_string()) throw InvalidArgument(std::string("'") + key + "' must hold strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

}  // namespace

LoadedCorpus parse_corpus(std::istream& in, const std::string& source) {
  LoadedCorpus out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = source + ":" + std::to_string(line_no);
    try {
      const json j = json::parse(line);
      if (!j.is_object()) throw InvalidArgument("record is not a JSON object");
      LabeledExample e;
      e.tokens = string_array(j, "tokens");
      e.ner_tags = string_array(j, "ner_tags");
      if (!j.contains("intent") || !j.at("intent").is_string()) {
        throw InvalidArgument("missing string 'intent'");
      }
      e.intent = j.at("intent").get<std::string>();
      validate_example(e);
      out.examples.push_back(std::move(e));
    } catch (const json::exception& ex) {
      throw ParseError(where + ": invalid JSON: " + ex.what());
    } catch (const InvalidArgument& ex) {
      throw ParseError(where + ": " + ex.what());
    }
  }
  if (out.examples.empty()) throw EmptyCorpusError(source + ": corpus is empty");
  out.intents = collect_intents(out.examples);
  out.tags = collect_tags(out.examples);
  return out;
}

LoadedCorpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open corpus file " + path.string());
  return parse_corpus(in, path.string());
}

std::string to_json_line(const LabeledExample& example) {
  json j;
  j["tokens"] = example.tokens;
  j["ner_tags"] = example.ner_tags;
  j["intent"] = example.intent;
  return j.dump();
}

void write_corpus(std::ostream& out, std::span<const LabeledExample> examples) {
  for (const auto& e : examples) out << to_json_line(e) << '\n';
}

void save_corpus(const std::filesystem::path& path, std::span<const LabeledExample> examples) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write corpus file " + path.string());
  write_corpus(out, examples);
  if (!out) throw Error("failed writing corpus file " + path.string());
}

}  // namespace canex::data
