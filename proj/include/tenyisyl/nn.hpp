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
#include "tenyisyl/crf.hpp"
#include "tenyisyl/rng.hpp"
#include "tenyisyl/tagging.hpp"
#include "tenyisyl/tensor.hpp"

namespace tenyisyl {

/// Fixed 27-entry character vocabulary: id 0 is padding, id 1 the hyphen,
/// ids 2-26 the letters in canonical order.
namespace vocab {

inline constexpr std::size_t kSize = 27;
inline constexpr std::size_t kPad = 0;
inline constexpr std::size_t kHyphenId = 1;

/// Letter → id. Throws std::invalid_argument on a character outside the
/// alphabet (the hyphen maps to kHyphenId).
std::size_t id_of(char32_t c);

/// Inverse for ids 1..26; id 0 has no character.
char32_t char_of(std::size_t id);

/// Encodes a surface. Hyphens are kept (as kHyphenId) or dropped depending
/// on the consumer: taggers drop them, seq2seq keeps them.
std::vector<std::uint16_t> encode(std::u32string_view surface,
                                  bool keep_hyphens);

/// The 26 real characters in id order, UTF-8, for checkpoint headers.
std::string table();

}  // namespace vocab

/// One trainable array: value, gradient, and Adam moments, all same shape.
struct Param {
  std::string name;
  Tensor value;
  Tensor grad;
  Tensor m;
  Tensor v;

  bool empty() const { return value.size() == 0; }
  void init(const std::string& param_name, std::size_t rows, std::size_t cols);
};

void init_uniform(Tensor& t, Rng& rng, double lo, double hi);
void init_glorot(Tensor& t, Rng& rng);  // uniform ±sqrt(6/(fan_in+fan_out))

/// Adam with bias-corrected moments. One step() spans every parameter of a
/// model; the step counter is shared.
class Adam {
 public:
  Adam(double lr, double beta1 = 0.9, double beta2 = 0.999,
       double eps = 1e-7);

  /// Applies grads to values and advances the step counter. Throws
  /// std::runtime_error on a non-finite gradient.
  void step(const std::vector<Param*>& params);

  long long steps_taken() const { return t_; }

 private:
  double lr_, beta1_, beta2_, eps_;
  long long t_ = 0;
};

/// A padded batch of tag examples, rows sorted by length descending so each
/// timestep only touches a live prefix of rows.
struct TagBatch {
  std::size_t rows = 0;
  std::size_t steps = 0;
  std::vector<std::uint16_t> ids;   // rows×steps, row-major, pad 0
  std::vector<std::uint8_t> gold;   // rows×steps, 0 = S, 1 = C, 2 = pad
  std::vector<std::size_t> lengths; // per row
  std::vector<std::size_t> live;    // per step: rows still inside their word
  std::vector<std::size_t> source;  // row → position in the input list

  std::uint16_t id_at(std::size_t r, std::size_t t) const {
    return ids[r * steps + t];
  }
  std::uint8_t gold_at(std::size_t r, std::size_t t) const {
    return gold[r * steps + t];
  }
};

/// Encoded example: hyphen-free letter ids plus gold tags ('S'/'C' chars;
/// empty when only predicting).
struct TagExample {
  std::vector<std::uint16_t> ids;
  std::string tags;
};

TagExample make_tag_example(const SyllabifiedWord& word);
TagExample make_tag_example(std::u32string_view surface);

/// Builds a batch from a list of examples (by pointer, so shuffled epochs
/// need no copies) or from examples[first, first+count). Empty examples are
/// rejected.
TagBatch make_tag_batch(const std::vector<const TagExample*>& examples);
TagBatch make_tag_batch(const std::vector<TagExample>& examples,
                        std::size_t first, std::size_t count);

enum class TaggerKind { kLstm, kBlstm, kBlstmCrf };

std::string to_string(TaggerKind kind);
TaggerKind tagger_kind_from_string(const std::string& name);

struct TaggerDims {
  std::size_t vocab = vocab::kSize;
  std::size_t embed = 128;
  std::size_t hidden = 256;
  std::size_t classes = 3;
};

/// Loss/accuracy tally for one batch. `denom` is tokens for the softmax
/// taggers and words for the CRF variant (whole-sequence likelihood).
struct BatchStats {
  double loss_sum = 0.0;
  std::size_t denom = 0;
  std::size_t tokens = 0;
  std::size_t correct = 0;

  double mean_loss() const { return loss_sum / static_cast<double>(denom); }
  double accuracy() const {
    return static_cast<double>(correct) / static_cast<double>(tokens);
  }
};

/// Recurrent tagger over letter ids: embedding → (B)LSTM → dense head, with
/// an optional CRF output layer. All arithmetic double precision, all
/// from-scratch; weights are seeded at construction.
class TaggerModel {
 public:
  TaggerModel(TaggerKind kind, TaggerDims dims, std::uint64_t seed);

  TaggerKind kind() const { return kind_; }
  const TaggerDims& dims() const { return dims_; }

  std::size_t parameter_count() const;
  std::vector<Param*> trainable();
  std::vector<const Param*> trainable() const;
  void zero_grads();

  /// Full forward pass; with compute_grads also backpropagates, adding into
  /// every parameter's grad. Loss is the masked mean cross-entropy (softmax
  /// kinds) or the mean per-word CRF negative log-likelihood.
  BatchStats forward_backward(const TagBatch& batch, bool compute_grads);

  /// Greedy tags (Viterbi for the CRF kind), pad class masked out of the
  /// decision and the first tag forced to S. Output order matches input.
  std::vector<TagSequence> predict(const std::vector<TagExample>& examples);
  TagSequence predict_one(std::u32string_view surface);

  /// Weight snapshot/restore, used for best-epoch checkpointing.
  std::vector<Tensor> snapshot_values() const;
  void restore_values(const std::vector<Tensor>& values);

 private:
  TaggerKind kind_;
  TaggerDims dims_;
  Param embedding_;
  Param fwd_w_, fwd_u_, fwd_b_;
  Param bwd_w_, bwd_u_, bwd_b_;
  Param dense_w_, dense_b_;
  Param crf_kernel_, crf_chain_, crf_bias_, crf_left_, crf_right_;

  CrfLayer crf_view() const;
};

struct TrainConfig {
  std::size_t epochs = 40;
  std::size_t batch_size = 128;
  double lr = 0.001;
  std::uint64_t seed = 0;
};

struct EpochMetrics {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double train_acc = 0.0;
  double valid_loss = 0.0;
  double valid_acc = 0.0;
};

std::string metrics_csv(const std::vector<EpochMetrics>& metrics);

struct TaggerTrainResult {
  TaggerModel model;
  std::vector<EpochMetrics> metrics;
  std::size_t best_epoch = 0;  // 1-based, lowest validation loss
};

/// Epoch loop with seeded shuffling and padded batches; keeps the weights
/// from the epoch with the lowest validation loss. Throws std::runtime_error
/// naming the epoch if the loss leaves the finite range.
TaggerTrainResult train_tagger(TaggerKind kind,
                               const std::vector<SyllabifiedWord>& train,
                               const std::vector<SyllabifiedWord>& valid,
                               const TrainConfig& cfg,
                               const TaggerDims& dims = TaggerDims{});

}  // namespace tenyisyl
