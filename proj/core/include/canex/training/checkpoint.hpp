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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "canex/training/trainer.hpp"

// Binary checkpoint layout (all integers little-endian):
//   magic "CANEXCKP" | u32 version = 1
//   u64 header length | header JSON (model config, vocabularies, labels,
//                                    free-form metadata)
//   u32 tensor count
//   per tensor: u32 name length | name | u64 rows | u64 cols |
//               rows*cols float64, row-major
//   32-byte SHA-256 of every preceding byte
namespace canex::training {

struct Checkpoint {
  TrainedModel model;
  nlohmann::json metadata = nlohmann::json::object();
};

std::vector<std::uint8_t> serialize_checkpoint(const TrainedModel& model,
                                               const nlohmann::json& metadata = nlohmann::json::object());
// Throws IntegrityError on truncation or checksum mismatch, ParseError on a
// well-checksummed but inconsistent payload.
Checkpoint deserialize_checkpoint(const std::vector<std::uint8_t>& bytes);

void save_checkpoint(const std::filesystem::path& path, const TrainedModel& model,
                     const nlohmann::json& metadata = nlohmann::json::object());
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace canex::training
