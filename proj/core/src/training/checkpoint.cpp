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

#include "canex/training/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "canex/error.hpp"
#include "canex/numerics/hash.hpp"

namespace canex::training {
namespace {

constexpr char kMagic[8] = {'C', 'A', 'N', 'E', 'X', 'C', 'K', 'P'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kDigestSize = 32;

class Writer {
 public:
  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    out_.insert(out_.end(), p, p + n);
  }
  template <typename T>
  void integer(T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { integer(std::bit_cast<std::uint64_t>(v)); }
  std::vector<std::uint8_t>& buffer() { return out_; }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  Reader(const std::uint8_t* data, std::size_t size) : data_(data), size_(size) {}
  void need(std::size_t n) const {
    if (size_ - pos_ < n) throw IntegrityError("checkpoint truncated");
  }
  template <typename T>
  T integer() {
    need(sizeof(T));
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(static_cast<T>(data_[pos_ + i]) << (8 * i));
    pos_ += sizeof(T);
    return v;
  }
  double f64() { return std::bit_cast<double>(integer<std::uint64_t>()); }
  std::string string(std::size_t n) {
    need(n);
    std::string s(reinterpret_cast<const char*>(data_ + pos_), n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == size_; }

 private:
  const std::uint8_t* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> serialize_checkpoint(const TrainedModel& model, const nlohmann::json& metadata) {
  nlohmann::json header;
  header["model_config"] = model.config;
  header["vocabulary"] = model.vocab.tokens();
  header["vocabulary_has_unk"] = model.vocab.has_unk();
  header["char_vocabulary"] = model.chars.tokens();
  header["intents"] = model.intents.labels();
  header["tags"] = model.tags.labels();
  header["metadata"] = metadata;
  const std::string header_text = header.dump();

  Writer w;
  w.bytes(kMagic, sizeof(kMagic));
  w.integer<std::uint32_t>(kVersion);
  w.integer<std::uint64_t>(header_text.size());
  w.bytes(header_text.data(), header_text.size());
  const auto named = model.params.named();
  w.integer<std::uint32_t>(static_cast<std::uint32_t>(named.size()));
  for (const auto& [name, t] : named) {
    w.integer<std::uint32_t>(static_cast<std::uint32_t>(name.size()));
    w.bytes(name.data(), name.size());
    w.integer<std::uint64_t>(static_cast<std::uint64_t>(t->rows()));
    w.integer<std::uint64_t>(static_cast<std::uint64_t>(t->cols()));
    for (Eigen::Index r = 0; r < t->rows(); ++r) {
      for (Eigen::Index c = 0; c < t->cols(); ++c) w.f64((*t)(r, c));
    }
  }
  numerics::Sha256 h;
  h.update(w.buffer());
  const auto digest = h.finish();
  w.bytes(digest.data(), digest.size());
  return std::move(w.buffer());
}

Checkpoint deserialize_checkpoint(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < sizeof(kMagic) + 4 + kDigestSize) throw IntegrityError("checkpoint truncated");
  if (std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw IntegrityError("not a checkpoint file (bad magic)");
  }
  const std::size_t body = bytes.size() - kDigestSize;
  numerics::Sha256 h;
  h.update(std::span(bytes.data(), body));
  const auto digest = h.finish();
  if (std::memcmp(digest.data(), bytes.data() + body, kDigestSize) != 0) {
    throw IntegrityError("checkpoint checksum mismatch (truncated or corrupted file)");
  }

  Reader r(bytes.data() + sizeof(kMagic), body - sizeof(kMagic));
  const auto version = r.integer<std::uint32_t>();
  if (version != kVersion) throw ParseError("unsupported checkpoint version " + std::to_string(version));
  const auto header_len = r.integer<std::uint64_t>();
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(r.string(header_len));
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("checkpoint header: ") + ex.what());
  }

  Checkpoint ck;
  TrainedModel& m = ck.model;
  try {
    m.config = header.at("model_config").get<nlu::ModelConfig>();
    m.vocab = data::Vocabulary::from_ordered(header.at("vocabulary").get<std::vector<std::string>>(),
                                             header.value("vocabulary_has_unk", true));
    m.chars = data::Vocabulary::from_ordered(header.at("char_vocabulary").get<std::vector<std::string>>(), true);
    m.intents = data::LabelSet(header.at("intents").get<std::vector<std::string>>());
    m.tags = data::LabelSet(header.at("tags").get<std::vector<std::string>>());
    ck.metadata = header.value("metadata", nlohmann::json::object());
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("checkpoint header: ") + ex.what());
  }

  const auto count = r.integer<std::uint32_t>();
  auto named = m.params.named();
  if (count != named.size()) throw ParseError("checkpoint holds an unexpected number of tensors");
  for (auto& [name, t] : named) {
    const std::string stored = r.string(r.integer<std::uint32_t>());
    if (stored != name) throw ParseError("checkpoint tensor '" + stored + "' where '" + name + "' expected");
    const auto rows = r.integer<std::uint64_t>();
    const auto cols = r.integer<std::uint64_t>();
    r.need(rows * cols * 8);
    t->resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < t->rows(); ++i) {
      for (Eigen::Index j = 0; j < t->cols(); ++j) (*t)(i, j) = r.f64();
    }
  }
  if (!r.done()) throw ParseError("checkpoint has trailing bytes");
  if (m.config.vocab_size != static_cast<int>(m.vocab.size()) ||
      m.config.intent_count != static_cast<int>(m.intents.size()) ||
      m.config.tag_count != static_cast<int>(m.tags.size()) ||
      m.params.word_embeddings.rows() != m.config.vocab_size) {
    throw ParseError("checkpoint header disagrees with tensor shapes");
  }
  m.rebuild_token_chars();
  return ck;
}

void save_checkpoint(const std::filesystem::path& path, const TrainedModel& model,
                     const nlohmann::json& metadata) {
  const auto bytes = serialize_checkpoint(model, metadata);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write checkpoint " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed writing checkpoint " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open checkpoint " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize_checkpoint(bytes);
}

}  // namespace canex::training
