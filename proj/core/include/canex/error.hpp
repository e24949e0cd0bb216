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

#include <stdexcept>
#include <string>

namespace canex {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller passed a value outside the documented domain (bad temperature,
// non-finite logits, empty input, unknown scheme name).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A precondition that only a programming error can break: shape mismatch,
// label index out of range, frozen tensors in a gradient registry.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// Malformed input file (corpus, embeddings, config, checkpoint).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Checkpoint truncated or checksum mismatch.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

// Loss or parameters became non-finite.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace canex
