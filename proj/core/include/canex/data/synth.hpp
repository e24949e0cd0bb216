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
#include <map>
#include <string>
#include <vector>

#include "canex/data/example.hpp"

namespace canex::data {

// Values for a {slot} placeholder. Multi-word values are space separated.
// `entity` empty means the filled tokens are tagged O.
struct SlotFiller {
  std::string entity;
  std::vector<std::string> values;
};

struct IntentTemplates {
  std::string intent;
  std::vector<std::string> templates;
  // Templates that mention digit or color words; drawn with `rare_rate`.
  std::vector<std::string> rare_templates;
};

struct SynthConfig {
  std::size_t size = 2000;
  std::uint64_t seed = 7;
  double rare_rate = 0.02;
  std::vector<IntentTemplates> intents;
  std::map<std::string, SlotFiller> slots;

  // Five Snips-like intents over six entity types.
  static SynthConfig defaults();
};

// Template-filled utterances; deterministic in (config, seed).
std::vector<LabeledExample> synth_corpus(const SynthConfig& config);

// Deterministic shuffle then split, `val_fraction` of the examples (rounded
// to nearest) going to validation.
Corpus split_train_val(std::vector<LabeledExample> examples, double val_fraction, std::uint64_t seed);

}  // namespace canex::data
