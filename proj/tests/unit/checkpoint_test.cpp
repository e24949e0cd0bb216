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

#include <filesystem>
#include <fstream>

#include "canex/error.hpp"
#include "canex/training/checkpoint.hpp"
#include "test_util.hpp"

namespace canex::training {
namespace {

const TrainResult& trained() {
  static const TrainResult r = [] {
    const auto corpus = canex::testing::tiny_corpus(12, nullptr);
    return canex::testing::train_tiny(corpus, 1, true);
  }();
  return r;
}

TEST(Checkpoint, BitExactRoundTrip) {
  const auto& m = trained().model;
  const auto bytes = serialize_checkpoint(m, {{"note", "x"}});
  const auto back = deserialize_checkpoint(bytes);
  EXPECT_TRUE(back.model.params == m.params);
  EXPECT_EQ(nlu::params_hash(back.model.params), nlu::params_hash(m.params));
  EXPECT_EQ(back.model.config, m.config);
  EXPECT_EQ(back.model.vocab, m.vocab);
  EXPECT_EQ(back.model.chars, m.chars);
  EXPECT_EQ(back.model.tags, m.tags);
  EXPECT_EQ(back.model.token_chars, m.token_chars);
  EXPECT_EQ(back.metadata["note"], "x");
  EXPECT_EQ(serialize_checkpoint(back.model, {{"note", "x"}}), bytes);
}

TEST(Checkpoint, LittleEndianLayout) {
  const auto bytes = serialize_checkpoint(trained().model);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 8), "CANEXCKP");
  EXPECT_EQ(bytes[8], 1);  // version, low byte first
  EXPECT_EQ(bytes[9], 0);
}

TEST(Checkpoint, TruncationIsIntegrityError) {
  const auto bytes = serialize_checkpoint(trained().model);
  for (std::size_t keep : {std::size_t{0}, std::size_t{10}, bytes.size() / 2, bytes.size() - 1}) {
    const std::vector<std::uint8_t> cut(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(keep));
    EXPECT_THROW(deserialize_checkpoint(cut), IntegrityError) << keep;
  }
}

TEST(Checkpoint, CorruptionIsIntegrityError) {
  auto bytes = serialize_checkpoint(trained().model);
  bytes[bytes.size() / 2] ^= 0x40;
  EXPECT_THROW(deserialize_checkpoint(bytes), IntegrityError);
}

TEST(Checkpoint, FileRoundTripAndTruncatedFile) {
  const auto dir = std::filesystem::temp_directory_path() / "canex_ckpt_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "m.ckpt";
  save_checkpoint(path, trained().model);
  EXPECT_TRUE(load_checkpoint(path).model.params == trained().model.params);
  std::filesystem::resize_file(path, std::filesystem::file_size(path) - 5);
  EXPECT_THROW(load_checkpoint(path), IntegrityError);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace canex::training
