/*
Copyright 2026 The fagcn Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "errors.hpp"
#include "json.hpp"

namespace fagcn {

using nlohmann::json;

namespace {

constexpr char kMagic[8] = {'F', 'A', 'G', 'C', 'N', 'C', 'K', 'P'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::string& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xFF));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xFF));
}

class Reader {
 public:
  Reader(const std::string& bytes, std::size_t end) : bytes_(bytes), end_(end) {}

  std::uint64_t u(int width) {
    need(static_cast<std::size_t>(width));
    std::uint64_t v = 0;
    for (int b = 0; b < width; ++b) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + b])) << (8 * b);
    }
    pos_ += static_cast<std::size_t>(width);
    return v;
  }

  std::string raw(std::size_t n) {
    need(n);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  bool done() const { return pos_ == end_; }

 private:
  void need(std::size_t n) const {
    if (n > end_ - pos_) throw DataError("checkpoint: truncated");
  }
  const std::string& bytes_;
  std::size_t end_;
  std::size_t pos_ = 0;
};

}  // namespace

std::uint64_t fnv1a64(const std::string& bytes, std::size_t length) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < length; ++i) {
    h ^= static_cast<unsigned char>(bytes[i]);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string serialize_checkpoint(Checkpoint& ck) {
  const std::vector<NamedParam> named = ck.params.named();
  json meta = {{"config", json::parse(ck.config.to_json())},
               {"labels", ck.label_names},
               {"vocab_size", ck.vocab_size},
               {"num_nodes", ck.num_nodes},
               {"matrices", named.size()}};
  const std::string meta_text = meta.dump();

  std::string out(kMagic, sizeof kMagic);
  put_u32(out, kVersion);
  put_u64(out, meta_text.size());
  out += meta_text;
  for (const NamedParam& p : named) {
    put_u32(out, static_cast<std::uint32_t>(p.name.size()));
    out += p.name;
    put_u64(out, p.matrix->rows());
    put_u64(out, p.matrix->cols());
    for (double x : p.matrix->values()) put_u64(out, std::bit_cast<std::uint64_t>(x));
  }
  put_u64(out, fnv1a64(out, out.size()));
  return out;
}

Checkpoint deserialize_checkpoint(const std::string& bytes) {
  if (bytes.size() < sizeof kMagic + 4 + 8 + 8) throw DataError("checkpoint: file too short");
  if (std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
    throw DataError("checkpoint: bad magic");
  }
  const std::size_t body = bytes.size() - 8;
  Reader tail(bytes.substr(body), 8);
  if (tail.u(8) != fnv1a64(bytes, body)) throw DataError("checkpoint: checksum mismatch");

  Reader r(bytes, body);
  r.raw(sizeof kMagic);
  if (const auto v = r.u(4); v != kVersion) {
    throw DataError("checkpoint: unsupported version " + std::to_string(v));
  }
  const std::size_t meta_len = r.u(8);
  json meta;
  Checkpoint ck;
  try {
    meta = json::parse(r.raw(meta_len));
    ck.config = ExperimentConfig::from_json(meta.at("config").dump());
    ck.label_names = meta.at("labels").get<std::vector<std::string>>();
    ck.vocab_size = meta.at("vocab_size").get<std::size_t>();
    ck.num_nodes = meta.at("num_nodes").get<std::size_t>();
  } catch (const json::exception& e) {
    throw DataError(std::string("checkpoint: bad metadata: ") + e.what());
  } catch (const ConfigError& e) {
    throw DataError(std::string("checkpoint: bad config: ") + e.what());
  }

  std::map<std::string, DenseMatrix> matrices;
  const std::size_t count = meta.value("matrices", std::size_t{0});
  for (std::size_t k = 0; k < count; ++k) {
    const std::string name = r.raw(r.u(4));
    const std::uint64_t rows = r.u(8);
    const std::uint64_t cols = r.u(8);
    if (cols != 0 && rows > (body / 8) / cols) throw DataError("checkpoint: matrix too large");
    std::vector<double> values(rows * cols);
    for (double& x : values) x = std::bit_cast<double>(r.u(8));
    matrices.emplace(name, DenseMatrix(rows, cols, std::move(values)));
  }
  if (!r.done()) throw DataError("checkpoint: trailing bytes");

  // Allocate the expected shapes, then require an exact match from the file.
  const ExperimentConfig& c = ck.config;
  const std::size_t classes = ck.label_names.size();
  ck.params.variant = c.variant;
  if (c.variant == ModelVariant::kBaselineGcn) {
    ck.params.baseline_w0 = DenseMatrix(ck.vocab_size, c.d_h);
    ck.params.baseline_w1 = DenseMatrix(c.d_h, classes);
  } else {
    ck.params.embeddings = DenseMatrix(ck.vocab_size, c.d_i);
    ck.params.lstm_fwd = zero_lstm_direction(c.d_i, c.d_o);
    ck.params.lstm_bwd = zero_lstm_direction(c.d_i, c.d_o);
    ck.params.attention.variant = *attention_of(c.variant);
    if (c.variant == ModelVariant::kSelf) ck.params.attention.w_self = DenseMatrix(1, c.d_o);
    if (c.variant == ModelVariant::kContext) {
      ck.params.attention.w_context = DenseMatrix(c.d_o, c.d_o);
    }
    ck.params.w0 = DenseMatrix(c.d_h, c.d_o);
    ck.params.w1 = DenseMatrix(c.d_h, classes);
  }
  const std::vector<NamedParam> named = ck.params.named();
  if (named.size() != matrices.size()) {
    throw DataError("checkpoint: expected " + std::to_string(named.size()) + " matrices, found " +
                    std::to_string(matrices.size()));
  }
  for (const NamedParam& p : named) {
    auto it = matrices.find(p.name);
    if (it == matrices.end()) throw DataError("checkpoint: missing matrix " + p.name);
    if (!it->second.same_shape(*p.matrix)) {
      throw DataError("checkpoint: matrix " + p.name + " is " + it->second.shape_string() +
                      ", expected " + p.matrix->shape_string());
    }
    *p.matrix = std::move(it->second);
  }
  return ck;
}

void save_checkpoint(Checkpoint& ck, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write checkpoint '" + path.string() + "'");
  const std::string bytes = serialize_checkpoint(ck);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ConfigError("failed writing checkpoint '" + path.string() + "'");
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open checkpoint '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize_checkpoint(buf.str());
}

void check_compatible(const Checkpoint& ck, std::size_t num_nodes, std::size_t vocab_size,
                      std::size_t num_classes) {
  auto expect = [](const char* what, std::size_t expected, std::size_t found) {
    if (expected != found) {
      throw ShapeError(std::string("checkpoint expects ") + what + " " + std::to_string(expected) +
                       ", found " + std::to_string(found));
    }
  };
  expect("node count", ck.num_nodes, num_nodes);
  expect("vocabulary size", ck.vocab_size, vocab_size);
  expect("class count", ck.label_names.size(), num_classes);
}

}  // namespace fagcn
