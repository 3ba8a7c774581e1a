// Copyright 2026 The Tenyisyl Authors
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

#include "tenyisyl/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace tenyisyl {

namespace {

constexpr char kMagic[4] = {'T', 'S', 'Y', 'L'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
}

void put_string(std::string& out, const std::string& s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out += s;
}

struct Reader {
  std::string_view bytes;
  std::size_t pos = 0;

  void need(std::size_t n) const {
    if (bytes.size() - pos < n) {
      throw std::runtime_error("checkpoint: truncated");
    }
  }

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<std::uint32_t>(
               static_cast<unsigned char>(bytes[pos + i]))
           << (8 * i);
    }
    pos += 4;
    return v;
  }

  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= static_cast<std::uint64_t>(
               static_cast<unsigned char>(bytes[pos + i]))
           << (8 * i);
    }
    pos += 8;
    return v;
  }

  std::string str() {
    const std::uint32_t n = u32();
    need(n);
    std::string s(bytes.substr(pos, n));
    pos += n;
    return s;
  }
};

}  // namespace

const Tensor& Checkpoint::find(const std::string& name) const {
  for (const auto& [tensor_name, value] : tensors) {
    if (tensor_name == name) return value;
  }
  throw std::runtime_error("checkpoint: missing tensor " + name);
}

std::string serialize(const Checkpoint& ckpt) {
  std::string out(kMagic, 4);
  put_u32(out, kVersion);
  put_string(out, ckpt.arch);
  put_string(out, ckpt.vocab);
  put_u32(out, static_cast<std::uint32_t>(ckpt.tensors.size()));
  for (const auto& [name, value] : ckpt.tensors) {
    put_string(out, name);
    put_u64(out, value.rows());
    put_u64(out, value.cols());
    for (std::size_t i = 0; i < value.size(); ++i) {
      std::uint64_t bits;
      static_assert(sizeof bits == sizeof(double));
      std::memcpy(&bits, &value.data()[i], sizeof bits);
      put_u64(out, bits);
    }
  }
  return out;
}

Checkpoint deserialize(std::string_view bytes) {
  Reader r{bytes};
  r.need(4);
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw std::runtime_error("checkpoint: bad magic");
  }
  r.pos = 4;
  if (r.u32() != kVersion) {
    throw std::runtime_error("checkpoint: unsupported version");
  }
  Checkpoint ckpt;
  ckpt.arch = r.str();
  ckpt.vocab = r.str();
  const std::uint32_t count = r.u32();
  for (std::uint32_t k = 0; k < count; ++k) {
    const std::string name = r.str();
    const std::uint64_t rows = r.u64();
    const std::uint64_t cols = r.u64();
    if (rows == 0 || cols == 0 || rows > (1u << 24) || cols > (1u << 24)) {
      throw std::runtime_error("checkpoint: bad tensor shape");
    }
    Tensor t(rows, cols);
    for (std::size_t i = 0; i < t.size(); ++i) {
      const std::uint64_t bits = r.u64();
      std::memcpy(&t.data()[i], &bits, sizeof bits);
    }
    ckpt.tensors.emplace_back(name, std::move(t));
  }
  if (r.pos != bytes.size()) {
    throw std::runtime_error("checkpoint: trailing bytes");
  }
  return ckpt;
}

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("checkpoint: cannot write " + path);
  const std::string bytes = serialize(ckpt);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("checkpoint: write failed for " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint: cannot read " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  return deserialize(bytes);
}

Checkpoint to_checkpoint(const TaggerModel& model) {
  Checkpoint ckpt;
  ckpt.arch = to_string(model.kind());
  ckpt.vocab = vocab::table();
  for (const Param* p : model.trainable()) {
    ckpt.tensors.emplace_back(p->name, p->value);
  }
  return ckpt;
}

namespace {

template <typename Model>
void restore_named(Model& model, const Checkpoint& ckpt) {
  auto params = model.trainable();
  if (params.size() != ckpt.tensors.size()) {
    throw std::runtime_error("checkpoint: tensor set mismatch");
  }
  for (Param* p : params) {
    const Tensor& t = ckpt.find(p->name);
    if (t.rows() != p->value.rows() || t.cols() != p->value.cols()) {
      throw std::runtime_error("checkpoint: shape mismatch for " + p->name);
    }
    p->value = t;
  }
}

}  // namespace

TaggerModel tagger_from_checkpoint(const Checkpoint& ckpt) {
  const TaggerKind kind = tagger_kind_from_string(ckpt.arch);
  if (ckpt.vocab != vocab::table()) {
    throw std::runtime_error("checkpoint: vocabulary mismatch");
  }
  const Tensor& emb = ckpt.find("embedding");
  TaggerDims dims;
  dims.vocab = emb.rows();
  dims.embed = emb.cols();
  dims.hidden =
      ckpt.find(kind == TaggerKind::kLstm ? "lstm.u" : "lstm_fwd.u").rows();

  TaggerModel model(kind, dims, 0);
  restore_named(model, ckpt);
  return model;
}

Checkpoint to_checkpoint(const Seq2SeqModel& model) {
  Checkpoint ckpt;
  ckpt.arch = "seq2seq";
  ckpt.vocab = vocab::table();
  for (const Param* p : model.trainable()) {
    ckpt.tensors.emplace_back(p->name, p->value);
  }
  return ckpt;
}

Seq2SeqModel seq2seq_from_checkpoint(const Checkpoint& ckpt) {
  if (ckpt.arch != "seq2seq") {
    throw std::runtime_error("checkpoint: not a seq2seq model");
  }
  if (ckpt.vocab != vocab::table()) {
    throw std::runtime_error("checkpoint: vocabulary mismatch");
  }
  Seq2SeqDims dims;
  dims.vocab = ckpt.find("src_emb").rows();
  dims.embed = ckpt.find("src_emb").cols();
  dims.units = ckpt.find("dec.u_h").rows();
  dims.attn = ckpt.find("attn.w1").cols();
  dims.tgt_vocab = ckpt.find("tgt_emb").rows();
  dims.tgt_embed = ckpt.find("tgt_emb").cols();

  Seq2SeqModel model(dims, 0);
  restore_named(model, ckpt);
  return model;
}

}  // namespace tenyisyl
