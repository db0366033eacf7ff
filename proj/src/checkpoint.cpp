// Copyright 2026 The intentml Authors
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
//
// Checkpoint container: "INTMLCK1" magic, u32 format version, a fixed-order
// little-endian field block (config, seed, parameter tensors with shapes,
// training history) and a CRC-32 trailer over everything before it.

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

#include "intentml/errors.hpp"

#include "intentml/model.hpp"

namespace intentml {

namespace {

constexpr char kMagic[8] = {'I', 'N', 'T', 'M', 'L', 'C', 'K', '1'};
constexpr std::uint32_t kFormatVersion = 1;

std::uint32_t crc32(const unsigned char* data, std::size_t n) {
  static const auto table = [] {
    std::array<std::uint32_t, 256> t{};
    for (std::uint32_t i = 0; i < 256; ++i) {
      std::uint32_t c = i;
      for (int k = 0; k < 8; ++k) {
        c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
      }
      t[i] = c;
    }
    return t;
  }();
  std::uint32_t c = 0xFFFFFFFFu;
  for (std::size_t i = 0; i < n; ++i) {
    c = table[(c ^ data[i]) & 0xFFu] ^ (c >> 8);
  }
  return c ^ 0xFFFFFFFFu;
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_i32(std::string& out, std::int32_t v) {
  put_u32(out, static_cast<std::uint32_t>(v));
}

void put_f64(std::string& out, double v) {
  put_u64(out, std::bit_cast<std::uint64_t>(v));
}

struct Reader {
  const unsigned char* p;
  std::size_t size;
  std::size_t off = 0;
  std::string path;

  void need(std::size_t n) const {
    if (off + n > size) {
      throw CorruptError(path + ": corrupt checkpoint (truncated)");
    }
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[off + i]) << (8 * i);
    off += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[off + i]) << (8 * i);
    off += 8;
    return v;
  }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  double f64() { return std::bit_cast<double>(u64()); }
};

}  // namespace

void IntentModel::save(const std::string& path) const {
  std::string out;
  out.append(kMagic, sizeof(kMagic));
  put_u32(out, kFormatVersion);

  put_u32(out, static_cast<std::uint32_t>(config_.kind));
  put_i32(out, config_.vocab_size);
  put_i32(out, config_.num_classes);
  put_i32(out, config_.hidden);
  put_i32(out, config_.attention_dim);
  put_i32(out, config_.layers);
  put_i32(out, config_.mlp_window);
  put_i32(out, config_.mlp_hidden1);
  put_i32(out, config_.mlp_hidden2);
  put_f64(out, config_.learning_rate);
  put_i32(out, config_.batch_size);
  put_i32(out, config_.max_epochs);
  put_i32(out, config_.patience);
  put_f64(out, config_.validation_fraction);
  put_i32(out, config_.threads);
  put_u64(out, config_.seed);

  // Parameter tensors in span order. Spans alias this model's storage, so
  // the const_cast stays read-only.
  auto& self = const_cast<IntentModel&>(*this);
  nn::SpanList spans = self.parameter_spans();
  put_u32(out, static_cast<std::uint32_t>(spans.size()));
  for (const auto& span : spans) {
    put_u64(out, span.size());
    for (double v : span) put_f64(out, v);
  }

  put_u32(out, static_cast<std::uint32_t>(history_.size()));
  for (const EpochStats& e : history_) {
    put_i32(out, e.epoch);
    put_f64(out, e.train_loss);
    put_f64(out, e.train_accuracy);
    put_f64(out, e.val_loss);
    put_f64(out, e.val_accuracy);
  }

  put_u32(out, crc32(reinterpret_cast<const unsigned char*>(out.data()),
                     out.size()));

  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw IoError("write failed for '" + path + "'");
}

IntentModel IntentModel::load(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open '" + path + "' for reading");
  std::string bytes((std::istreambuf_iterator<char>(file)),
                    std::istreambuf_iterator<char>());

  if (bytes.size() < sizeof(kMagic) + 8) {
    throw CorruptError(path + ": corrupt checkpoint (truncated)");
  }
  if (std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw CorruptError(path + ": not a checkpoint file");
  }
  const auto* raw = reinterpret_cast<const unsigned char*>(bytes.data());
  std::uint32_t stored_crc = 0;
  for (int i = 0; i < 4; ++i) {
    stored_crc |= static_cast<std::uint32_t>(raw[bytes.size() - 4 + i]) << (8 * i);
  }
  if (crc32(raw, bytes.size() - 4) != stored_crc) {
    throw CorruptError(path + ": checkpoint checksum mismatch");
  }

  Reader r{raw, bytes.size() - 4, sizeof(kMagic), path};
  const std::uint32_t version = r.u32();
  if (version != kFormatVersion) {
    throw CorruptError(path + ": unsupported checkpoint version " +
                       std::to_string(version));
  }

  ModelConfig cfg;
  const std::uint32_t kind = r.u32();
  if (kind > static_cast<std::uint32_t>(ModelKind::kMlp)) {
    throw CorruptError(path + ": corrupt checkpoint (bad model kind)");
  }
  cfg.kind = static_cast<ModelKind>(kind);
  cfg.vocab_size = r.i32();
  cfg.num_classes = r.i32();
  cfg.hidden = r.i32();
  cfg.attention_dim = r.i32();
  cfg.layers = r.i32();
  cfg.mlp_window = r.i32();
  cfg.mlp_hidden1 = r.i32();
  cfg.mlp_hidden2 = r.i32();
  cfg.learning_rate = r.f64();
  cfg.batch_size = r.i32();
  cfg.max_epochs = r.i32();
  cfg.patience = r.i32();
  cfg.validation_fraction = r.f64();
  cfg.threads = r.i32();
  cfg.seed = r.u64();
  try {
    cfg.validate();
  } catch (const std::exception& e) {
    throw CorruptError(path + ": corrupt checkpoint (" +
                       std::string(e.what()) + ")");
  }

  IntentModel model = IntentModel::build(cfg);
  nn::SpanList spans = model.parameter_spans();
  const std::uint32_t tensor_count = r.u32();
  if (tensor_count != spans.size()) {
    throw CorruptError(path + ": corrupt checkpoint (tensor count)");
  }
  for (auto& span : spans) {
    const std::uint64_t n = r.u64();
    if (n != span.size()) {
      throw CorruptError(path + ": corrupt checkpoint (tensor shape)");
    }
    for (double& v : span) v = r.f64();
  }

  const std::uint32_t history_count = r.u32();
  for (std::uint32_t i = 0; i < history_count; ++i) {
    EpochStats e;
    e.epoch = r.i32();
    e.train_loss = r.f64();
    e.train_accuracy = r.f64();
    e.val_loss = r.f64();
    e.val_accuracy = r.f64();
    model.history_.push_back(e);
  }
  if (r.off != r.size) {
    throw CorruptError(path + ": corrupt checkpoint (trailing bytes)");
  }
  return model;
}

}  // namespace intentml
