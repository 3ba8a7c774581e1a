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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tenyisyl/corpus.hpp"
#include "tenyisyl/nn.hpp"
#include "tenyisyl/tensor.hpp"

namespace tenyisyl {

/// Decoder-side token ids. GO opens every target; EOS closes it; S and C
/// are the emitted tags.
namespace tgt {
inline constexpr std::size_t kPad = 0;
inline constexpr std::size_t kGo = 1;
inline constexpr std::size_t kEos = 2;
inline constexpr std::size_t kS = 3;
inline constexpr std::size_t kC = 4;
inline constexpr std::size_t kSize = 5;
}  // namespace tgt

struct Seq2SeqDims {
  std::size_t vocab = vocab::kSize;  // hyphen kept in the source side
  std::size_t embed = 128;
  std::size_t units = 512;           // per encoder direction and decoder
  std::size_t attn = 512;
  std::size_t tgt_vocab = tgt::kSize;
  std::size_t tgt_embed = 128;
};

/// Per-step attention weights of one decoded word: rows are the emitted
/// tags, columns the source characters (hyphens included). Every row is a
/// probability distribution.
struct AttentionTrace {
  std::u32string source;
  TagSequence tags;
  Tensor weights;  // tags.size() × source.size()

  std::string to_csv() const;
};

struct DecodeResult {
  TagSequence tags;
  AttentionTrace trace;
};

/// Padded source/target batch. Rows are sorted by source length descending
/// so the encoder walks live prefixes; the decoder runs every row to the
/// longest target and masks the loss instead.
struct SeqBatch {
  std::size_t rows = 0;
  std::size_t src_steps = 0;
  std::size_t dec_steps = 0;
  std::vector<std::uint16_t> src;      // rows×src_steps, pad 0
  std::vector<std::uint8_t> y_in;      // rows×dec_steps, starts with GO
  std::vector<std::uint8_t> y_out;     // rows×dec_steps, ends with EOS
  std::vector<std::size_t> src_lengths;
  std::vector<std::size_t> tgt_lengths;  // tags + EOS
  std::vector<std::size_t> live;         // per source step
  std::vector<std::size_t> source;       // row → position in the input list

  std::uint16_t src_at(std::size_t r, std::size_t t) const {
    return src[r * src_steps + t];
  }
};

/// Encoded pair: source ids with hyphens kept, target tag ids (empty when
/// only decoding).
struct SeqExample {
  std::vector<std::uint16_t> src;
  std::vector<std::uint8_t> tgt;  // tag ids in {kS, kC}, no GO/EOS
};

SeqExample make_seq_example(const SyllabifiedWord& word);
SeqExample make_seq_example(std::u32string_view surface);

SeqBatch make_seq_batch(const std::vector<const SeqExample*>& examples);
SeqBatch make_seq_batch(const std::vector<SeqExample>& examples,
                        std::size_t first, std::size_t count);

/// Attention encoder-decoder: bidirectional GRU encoder over characters,
/// additive attention, GRU decoder emitting S/C until EOS. All arithmetic
/// double precision and from scratch.
class Seq2SeqModel {
 public:
  Seq2SeqModel(Seq2SeqDims dims, std::uint64_t seed);

  const Seq2SeqDims& dims() const { return dims_; }
  std::size_t parameter_count() const;
  std::vector<Param*> trainable();
  std::vector<const Param*> trainable() const;
  void zero_grads();

  /// Teacher-forced pass; with compute_grads also backpropagates. Loss is
  /// the masked mean cross-entropy over target tokens (EOS included).
  BatchStats forward_backward(const SeqBatch& batch, bool compute_grads);

  /// Greedy decode: argmax over {S, C, EOS} per step, stopping at EOS or
  /// after 2× the source length. The trace holds one row per emitted tag.
  DecodeResult decode_greedy(std::u32string_view surface);

  std::vector<Tensor> snapshot_values() const;
  void restore_values(const std::vector<Tensor>& values);

 private:
  Seq2SeqDims dims_;
  Param src_emb_;
  Param enc_fwd_w_zr_, enc_fwd_w_h_, enc_fwd_u_zr_, enc_fwd_u_h_,
      enc_fwd_b_zr_, enc_fwd_b_h_;
  Param enc_bwd_w_zr_, enc_bwd_w_h_, enc_bwd_u_zr_, enc_bwd_u_h_,
      enc_bwd_b_zr_, enc_bwd_b_h_;
  Param proj_w_, proj_b_;
  Param tgt_emb_;
  Param dec_w_zr_, dec_w_h_, dec_u_zr_, dec_u_h_, dec_b_zr_, dec_b_h_;
  Param attn_w1_, attn_w2_, attn_v_;
  Param comb_w_, comb_b_;
  Param out_w_, out_b_;
};

/// Epoch loop mirroring train_tagger: seeded shuffling, teacher forcing,
/// Adam, best validation epoch kept. Throws std::runtime_error naming the
/// epoch on divergence.
struct Seq2SeqTrainResult {
  Seq2SeqModel model;
  std::vector<EpochMetrics> metrics;
  std::size_t best_epoch = 0;
};

Seq2SeqTrainResult train_seq2seq(const std::vector<SyllabifiedWord>& train,
                                 const std::vector<SyllabifiedWord>& valid,
                                 const TrainConfig& cfg,
                                 const Seq2SeqDims& dims = Seq2SeqDims{});

}  // namespace tenyisyl
