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

#include "canex/nlu/embedding_file.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "canex/error.hpp"

namespace canex::nlu {

PretrainedEmbeddings parse_embedding_text(std::istream& in, const std::string& source,
                                          const std::unordered_set<std::string>* keep) {
  PretrainedEmbeddings out;
  std::string line;
  if (!std::getline(in, line)) throw ParseError(source + ": missing '<count> <dim>' header");
  long long count = 0;
  {
    std::istringstream header(line);
    if (!(header >> count >> out.dim) || count < 0 || out.dim < 1) {
      throw ParseError(source + ":1: header must be '<count> <dim>'");
    }
  }
  std::size_t line_no = 1;
  long long rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++rows;
    std::istringstream row(line);
    std::string token;
    row >> token;
    if (keep != nullptr && !keep->contains(token)) continue;
    numerics::Vector v(out.dim);
    for (int i = 0; i < out.dim; ++i) {
      if (!(row >> v(i)) || !std::isfinite(v(i))) {
        throw ParseError(source + ":" + std::to_string(line_no) + ": expected " +
                         std::to_string(out.dim) + " finite values for '" + token + "'");
      }
    }
    double extra = 0.0;
    if (row >> extra) {
      throw ParseError(source + ":" + std::to_string(line_no) + ": more than " +
                       std::to_string(out.dim) + " values for '" + token + "'");
    }
    out.vectors.insert_or_assign(token, std::move(v));
  }
  if (rows != count) {
    throw ParseError(source + ": header announces " + std::to_string(count) + " vectors, found " +
                     std::to_string(rows));
  }
  return out;
}

PretrainedEmbeddings load_embedding_text(const std::filesystem::path& path,
                                         const std::unordered_set<std::string>* keep) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open embedding file " + path.string());
  return parse_embedding_text(in, path.string(), keep);
}

EmbeddingFill apply_pretrained(numerics::Tensor& table, std::span<const std::string> vocabulary,
                               const PretrainedEmbeddings& pretrained) {
  if (table.cols() != pretrained.dim) {
    throw InvalidArgument("pretrained embeddings have width " + std::to_string(pretrained.dim) +
                          " but the model uses " + std::to_string(table.cols()));
  }
  if (static_cast<std::size_t>(table.rows()) != vocabulary.size()) {
    throw ContractViolation("apply_pretrained: table rows differ from vocabulary size");
  }
  EmbeddingFill fill;
  for (std::size_t i = 0; i < vocabulary.size(); ++i) {
    const auto it = pretrained.vectors.find(vocabulary[i]);
    if (it == pretrained.vectors.end()) {
      fill.missing.push_back(vocabulary[i]);
      continue;
    }
    table.row(static_cast<Eigen::Index>(i)) = it->second.transpose();
    ++fill.loaded;
  }
  return fill;
}

}  // namespace canex::nlu
