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
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "canex/numerics/tensor.hpp"

namespace canex::nlu {

// Word vectors from the plain-text interchange format: a "<count> <dim>"
// header, then "<token> v_1 ... v_dim" per line.
struct PretrainedEmbeddings {
  int dim = 0;
  std::unordered_map<std::string, numerics::Vector> vectors;
};

// When `keep` is non-null, tokens outside it are skipped while reading.
PretrainedEmbeddings parse_embedding_text(std::istream& in, const std::string& source,
                                          const std::unordered_set<std::string>* keep = nullptr);
PretrainedEmbeddings load_embedding_text(const std::filesystem::path& path,
                                         const std::unordered_set<std::string>* keep = nullptr);

struct EmbeddingFill {
  std::size_t loaded = 0;
  std::vector<std::string> missing;  // vocabulary tokens left at their random init
};

// Overwrites rows of `table` (|V| x dim) for every vocabulary token present
// in `pretrained`. Throws InvalidArgument on a width mismatch.
EmbeddingFill apply_pretrained(numerics::Tensor& table, std::span<const std::string> vocabulary,
                               const PretrainedEmbeddings& pretrained);

}  // namespace canex::nlu
