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

#include "tenyisyl/seq2seq.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "tenyisyl/checkpoint.hpp"
#include "tenyisyl/corpus.hpp"
#include "tenyisyl/text.hpp"

using namespace tenyisyl;

namespace {

Seq2SeqDims tiny_dims() {
  Seq2SeqDims dims;
  dims.embed = 2;
  dims.units = 4;
  dims.attn = 3;
  dims.tgt_embed = 2;
  return dims;
}

void zero_all(Seq2SeqModel& model) {
  for (Param* p : model.trainable()) p->value.fill(0.0);
}

}  // namespace

TEST_CASE("seq examples keep hyphens on the source side only") {
  const auto words = parse_corpus("chü ü mo -u\n");
  const SeqExample ex = make_seq_example(words[0]);
  CHECK(ex.src.size() == 8);
  CHECK(ex.src[6] == vocab::kHyphenId);
  REQUIRE(ex.tgt.size() == 7);
  // Tags S C C S S C S as target ids.
  const std::vector<std::uint8_t> want{tgt::kS, tgt::kC, tgt::kC, tgt::kS,
                                       tgt::kS, tgt::kC, tgt::kS};
  CHECK(ex.tgt == want);
  CHECK(make_seq_example(utf8_decode("ke-u")).src.size() == 4);
}

TEST_CASE("seq batches pad and mask per row") {
  const auto words = parse_corpus("ke\nte nyi di e\nmo ko\n");
  std::vector<SeqExample> ex;
  for (const auto& w : words) ex.push_back(make_seq_example(w));
  const SeqBatch batch = make_seq_batch(ex, 0, 3);

  CHECK(batch.rows == 3);
  CHECK(batch.src_steps == 8);
  CHECK(batch.dec_steps == 9);
  CHECK(batch.src_lengths == std::vector<std::size_t>{8, 4, 2});
  CHECK(batch.tgt_lengths == std::vector<std::size_t>{9, 5, 3});
  CHECK(batch.source == std::vector<std::size_t>{1, 2, 0});
  CHECK(batch.live == std::vector<std::size_t>{3, 3, 2, 2, 1, 1, 1, 1});

  // Row 0 is "te nyi di e": GO S C S C C S C S then tags shifted to y_out
  // ending in EOS.
  CHECK(batch.y_in[0] == tgt::kGo);
  CHECK(batch.y_in[1] == tgt::kS);
  CHECK(batch.y_out[0] == tgt::kS);
  CHECK(batch.y_out[8] == tgt::kEos);
  // Row 2 is "ke": S C EOS then padding.
  CHECK(batch.y_out[2 * 9 + 0] == tgt::kS);
  CHECK(batch.y_out[2 * 9 + 1] == tgt::kC);
  CHECK(batch.y_out[2 * 9 + 2] == tgt::kEos);
  CHECK(batch.y_out[2 * 9 + 3] == tgt::kPad);
  CHECK(batch.y_in[2 * 9 + 3] == tgt::kPad);
}

TEST_CASE("zero weights give uniform attention and an immediate EOS") {
  Seq2SeqModel model(tiny_dims(), 1);
  zero_all(model);
  // Tied logits decode as EOS on the first step: degenerate but not fatal.
  const DecodeResult res = model.decode_greedy(utf8_decode("tenyidie"));
  CHECK(res.tags.empty());
  CHECK(res.trace.tags.empty());
  CHECK(res.trace.source == utf8_decode("tenyidie"));

  // Forcing S off the tie exposes the attention rows: identical contexts
  // must attend uniformly.
  for (Param* p : model.trainable()) {
    if (p->name == "out.b") p->value(0, tgt::kS) = 1.0;
  }
  const DecodeResult forced = model.decode_greedy(utf8_decode("keke"));
  REQUIRE(forced.tags.size() == 8);  // runs to the 2×length cap
  for (char tag : forced.tags) CHECK(tag == 'S');
  REQUIRE(forced.trace.weights.rows() == 8);
  REQUIRE(forced.trace.weights.cols() == 4);
  for (std::size_t t = 0; t < 8; ++t) {
    for (std::size_t j = 0; j < 4; ++j) {
      CHECK(forced.trace.weights(t, j) == doctest::Approx(0.25).epsilon(1e-12));
    }
  }
}

TEST_CASE("single-character input attends with weight one") {
  Seq2SeqModel model(tiny_dims(), 5);
  for (Param* p : model.trainable()) {
    if (p->name == "out.b") p->value(0, tgt::kS) = 50.0;
  }
  const DecodeResult res = model.decode_greedy(utf8_decode("u"));
  REQUIRE(res.trace.weights.cols() == 1);
  REQUIRE(res.trace.weights.rows() >= 1);
  for (std::size_t t = 0; t < res.trace.weights.rows(); ++t) {
    CHECK(res.trace.weights(t, 0) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("attention rows are probability distributions under fuzz") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Seq2SeqModel model(tiny_dims(), seed);
    const DecodeResult res =
        model.decode_greedy(utf8_decode(seed % 2 ? "chüümo-u" : "tenyidie"));
    for (std::size_t t = 0; t < res.trace.weights.rows(); ++t) {
      double sum = 0.0;
      for (std::size_t j = 0; j < res.trace.weights.cols(); ++j) {
        const double w = res.trace.weights(t, j);
        CHECK(w >= 0.0);
        sum += w;
      }
      CHECK(std::abs(sum - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("trace csv lists source characters and tag rows") {
  Seq2SeqModel model(tiny_dims(), 2);
  for (Param* p : model.trainable()) {
    if (p->name == "out.b") p->value(0, tgt::kC) = 50.0;
  }
  const DecodeResult res = model.decode_greedy(utf8_decode("ke-u"));
  const std::string csv = res.trace.to_csv();
  CHECK(csv.rfind("tag,k,e,-,u\n", 0) == 0);
  const std::size_t lines = std::count(csv.begin(), csv.end(), '\n');
  CHECK(lines == res.trace.tags.size() + 1);
  CHECK(csv.find("\nC,") != std::string::npos);
}

TEST_CASE("teacher-forced loss and gradients agree with central differences") {
  Seq2SeqModel model(tiny_dims(), 17);
  const auto words = parse_corpus("ke\nte nyi di e\nchü ü mo -u\nmo ko we\n");
  std::vector<SeqExample> ex;
  for (const auto& w : words) ex.push_back(make_seq_example(w));
  const SeqBatch batch = make_seq_batch(ex, 0, ex.size());

  model.zero_grads();
  const BatchStats base = model.forward_backward(batch, true);
  CHECK(std::isfinite(base.loss_sum));
  CHECK(base.tokens == 3 + 9 + 8 + 7);

  const double h = 1e-5;
  for (Param* p : model.trainable()) {
    for (std::size_t i = 0; i < p->value.size(); ++i) {
      const double saved = p->value.data()[i];
      p->value.data()[i] = saved + h;
      const double up = model.forward_backward(batch, false).mean_loss();
      p->value.data()[i] = saved - h;
      const double down = model.forward_backward(batch, false).mean_loss();
      p->value.data()[i] = saved;

      const double numeric = (up - down) / (2.0 * h);
      const double analytic = p->grad.data()[i];
      const double rel = std::abs(analytic - numeric) /
                         std::max(1e-6, std::abs(analytic) + std::abs(numeric));
      if (rel >= 1e-4) {
        CAPTURE(p->name);
        CAPTURE(i);
        CAPTURE(analytic);
        CAPTURE(numeric);
        CHECK(rel < 1e-4);
      }
    }
  }
}

TEST_CASE("construction and decoding are deterministic") {
  Seq2SeqModel a(tiny_dims(), 33);
  Seq2SeqModel b(tiny_dims(), 33);
  const auto va = a.snapshot_values();
  const auto vb = b.snapshot_values();
  bool same = true;
  for (std::size_t i = 0; i < va.size(); ++i) {
    for (std::size_t j = 0; j < va[i].size(); ++j) {
      same = same && va[i].data()[j] == vb[i].data()[j];
    }
  }
  CHECK(same);
  const auto ra = a.decode_greedy(utf8_decode("tenyidie"));
  const auto rb = b.decode_greedy(utf8_decode("tenyidie"));
  CHECK(ra.tags == rb.tags);
}

TEST_CASE("training learns a toy corpus") {
  std::string text;
  for (int i = 0; i < 20; ++i) {
    text += "ke ke\nte nyi di e\nmo ko we\nchü ü mo -u\n";
  }
  const auto words = parse_corpus(text);
  std::vector<SyllabifiedWord> train(words.begin(), words.begin() + 64);
  std::vector<SyllabifiedWord> valid(words.begin() + 64, words.end());

  Seq2SeqDims dims;
  dims.embed = 8;
  dims.units = 16;
  dims.attn = 16;
  dims.tgt_embed = 8;
  TrainConfig cfg;
  cfg.epochs = 30;
  cfg.batch_size = 16;
  cfg.lr = 0.02;
  cfg.seed = 4;
  auto result = train_seq2seq(train, valid, cfg, dims);

  REQUIRE(result.metrics.size() == 30);
  CHECK(result.metrics.back().valid_loss < result.metrics.front().valid_loss);
  CHECK(result.metrics[result.best_epoch - 1].valid_acc > 0.9);

  // A word from the corpus decodes to its gold tags once trained.
  const auto res = result.model.decode_greedy(utf8_decode("tenyidie"));
  CHECK(res.tags == "SCSCCSCS");

  auto again = train_seq2seq(train, valid, cfg, dims);
  CHECK(metrics_csv(again.metrics) == metrics_csv(result.metrics));

  CHECK_THROWS_AS(train_seq2seq({}, valid, cfg, dims), std::invalid_argument);
}

TEST_CASE("seq2seq weights survive a checkpoint round trip") {
  Seq2SeqModel model(tiny_dims(), 8);
  const Checkpoint ckpt = to_checkpoint(model);
  CHECK(ckpt.arch == "seq2seq");
  const std::string bytes = serialize(ckpt);
  Seq2SeqModel relit = seq2seq_from_checkpoint(deserialize(bytes));
  CHECK(relit.parameter_count() == model.parameter_count());
  CHECK(relit.dims().units == 4);
  CHECK(relit.dims().attn == 3);
  const auto ra = model.decode_greedy(utf8_decode("chüümo-u"));
  const auto rb = relit.decode_greedy(utf8_decode("chüümo-u"));
  CHECK(ra.tags == rb.tags);
  for (std::size_t t = 0; t < ra.trace.weights.rows(); ++t) {
    for (std::size_t j = 0; j < ra.trace.weights.cols(); ++j) {
      CHECK(ra.trace.weights(t, j) == rb.trace.weights(t, j));
    }
  }

  Checkpoint wrong = to_checkpoint(model);
  wrong.arch = "blstm";
  CHECK_THROWS_AS(seq2seq_from_checkpoint(wrong), std::runtime_error);
}
