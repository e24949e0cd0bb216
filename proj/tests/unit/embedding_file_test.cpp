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

#include <gtest/gtest.h>

#include <sstream>

#include "canex/error.hpp"
#include "canex/nlu/embedding_file.hpp"

namespace canex::nlu {
namespace {

TEST(EmbeddingFile, ParsesAndApplies) {
  std::istringstream in("2 3\nhello 0.1 0.2 0.3\nworld -1 0 1.5\n");
  const auto e = parse_embedding_text(in, "mem");
  EXPECT_EQ(e.dim, 3);
  ASSERT_EQ(e.vectors.size(), 2u);
  numerics::Tensor table = numerics::Tensor::Zero(3, 3);
  const std::vector<std::string> vocab{"<unk>", "hello", "absent"};
  const auto fill = apply_pretrained(table, vocab, e);
  EXPECT_EQ(fill.loaded, 1u);
  EXPECT_EQ(fill.missing, (std::vector<std::string>{"<unk>", "absent"}));
  EXPECT_DOUBLE_EQ(table(1, 2), 0.3);
  EXPECT_EQ(table(2, 0), 0.0);
}

TEST(EmbeddingFile, RejectsMalformedInput) {
  std::istringstream count("3 2\na 1 2\n");
  EXPECT_THROW(parse_embedding_text(count, "m"), ParseError);
  std::istringstream width("1 2\na 1 2 3\n");
  EXPECT_THROW(parse_embedding_text(width, "m"), ParseError);
  std::istringstream nan("1 2\na nan 2\n");
  EXPECT_THROW(parse_embedding_text(nan, "m"), ParseError);
  std::istringstream header("x y\n");
  EXPECT_THROW(parse_embedding_text(header, "m"), ParseError);
}

TEST(EmbeddingFile, KeepFilterAndWidthCheck) {
  std::istringstream in("2 2\na 1 2\nb 3 4\n");
  const std::unordered_set<std::string> keep{"b"};
  const auto e = parse_embedding_text(in, "m", &keep);
  EXPECT_EQ(e.vectors.size(), 1u);
  numerics::Tensor table = numerics::Tensor::Zero(1, 3);
  const std::vector<std::string> vocab{"b"};
  EXPECT_THROW(apply_pretrained(table, vocab, e), InvalidArgument);
}

}  // namespace
}  // namespace canex::nlu
