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

// Release gate: one criterion per line, PASS/FAIL with the measured values.
// Run with --only SUBSTRING to execute a subset. The model-ordering
// criterion is soft: its numbers are reported but do not gate the exit
// code. Exit 0 iff every gated criterion passed.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tenyisyl/corpus.hpp"
#include "tenyisyl/crf.hpp"
#include "tenyisyl/eval.hpp"
#include "tenyisyl/nn.hpp"
#include "tenyisyl/rng.hpp"
#include "tenyisyl/seq2seq.hpp"
#include "tenyisyl/synth.hpp"
#include "tenyisyl/tagging.hpp"
#include "tenyisyl/tensor.hpp"

namespace {

using namespace tenyisyl;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, ...) {
  char buffer[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buffer, sizeof buffer, format, args);
  va_end(args);
  return buffer;
}

// ---------------------------------------------------------------------------
// Shared 10,000-word experiment (seed 42): corpus, 80:10:10 split, and the
// fully trained bidirectional model, built once and reused.

struct Experiment {
  CorpusSplit parts;
  std::vector<EpochMetrics> metrics;
  std::size_t best_epoch = 0;
  double word_accuracy_pct = 0.0;
};

constexpr std::uint64_t kExperimentSeed = 42;

TrainConfig reference_config(std::size_t epochs, std::size_t batch) {
  TrainConfig cfg;
  cfg.epochs = epochs;
  cfg.batch_size = batch;
  cfg.lr = 0.001;
  cfg.seed = kExperimentSeed;
  return cfg;
}

double heldout_accuracy(TaggerModel& model,
                        const std::vector<SyllabifiedWord>& test) {
  std::vector<TagExample> examples;
  examples.reserve(test.size());
  for (const auto& w : test) examples.push_back(make_tag_example(w));
  return word_accuracy(model.predict(examples), test).accuracy;
}

Experiment& experiment() {
  static std::optional<Experiment> cache;
  if (!cache) {
    cache.emplace();
    SplitSpec spec;
    spec.seed = kExperimentSeed;
    cache->parts = split(
        synthesize_corpus(default_synthesis_config(10000, kExperimentSeed)),
        spec);
    TaggerTrainResult result =
        train_tagger(TaggerKind::kBlstm, cache->parts.train,
                     cache->parts.valid, reference_config(40, 128));
    cache->metrics = std::move(result.metrics);
    cache->best_epoch = result.best_epoch;
    cache->word_accuracy_pct =
        heldout_accuracy(result.model, cache->parts.test);
  }
  return *cache;
}

// ---------------------------------------------------------------------------
// Criteria, cheapest first.

Outcome check_accuracy_arithmetic() {
  const struct {
    std::size_t correct;
    double want;
  } rows[] = {{982, 97.04}, {1004, 99.21}, {1002, 99.01}, {954, 94.27}};
  std::string detail;
  bool pass = true;
  for (const auto& row : rows) {
    const double got = accuracy_percent(row.correct, 1012);
    pass = pass && std::abs(got - row.want) < 1e-9;
    if (!detail.empty()) detail += ' ';
    detail += fmt("%zu/1012=%.2f", row.correct, got);
  }
  return {pass, detail + (pass ? " all exact" : " MISMATCH")};
}

Outcome check_parameter_counts() {
  const struct {
    TaggerKind kind;
    std::size_t want;
  } rows[] = {{TaggerKind::kLstm, 398467},
              {TaggerKind::kBlstm, 793475},
              {TaggerKind::kBlstmCrf, 793502}};
  std::string detail;
  bool pass = true;
  for (const auto& row : rows) {
    const TaggerModel model(row.kind, TaggerDims{}, 1);
    const std::size_t got = model.parameter_count();
    pass = pass && got == row.want;
    if (!detail.empty()) detail += ' ';
    detail += fmt("%s=%zu(want %zu)", to_string(row.kind).c_str(), got,
                  row.want);
  }
  return {pass, detail};
}

Outcome check_split_sizes() {
  SplitSpec spec;
  spec.seed = 7;
  const CorpusSplit parts =
      split(synthesize_corpus(default_synthesis_config(10120, 7)), spec);
  const bool pass = parts.train.size() == 8096 && parts.valid.size() == 1012 &&
                    parts.test.size() == 1012;
  return {pass, fmt("10120 -> %zu/%zu/%zu (want 8096/1012/1012)",
                    parts.train.size(), parts.valid.size(),
                    parts.test.size())};
}

Outcome check_tagging_codec() {
  const auto words = synthesize_corpus(default_synthesis_config(10000, 3));
  std::size_t hyphenated = 0;
  for (const auto& word : words) {
    const TagSequence tags = encode_tags(word);
    const SyllabifiedWord back = decode_tags(word.surface, tags);
    if (back.surface != word.surface || back.boundaries != word.boundaries) {
      return {false, "round trip changed '" + format_word(word) + "'"};
    }
    if (word.surface.find(U'-') != std::u32string::npos) ++hyphenated;
  }
  const struct {
    std::vector<std::u32string> syllables;
    const char* want;
  } exemplars[] = {{{U"chü", U"ü", U"mo", U"-u"}, "SCCSSCS"},
                   {{U"tsei", U"ü"}, "SCCCS"},
                   {{U"she", U"so", U"u"}, "SCCSCS"}};
  for (const auto& ex : exemplars) {
    const TagSequence got = encode_tags(make_word(ex.syllables));
    if (got != ex.want) {
      return {false, fmt("exemplar encoded as %s, want %s", got.c_str(),
                         ex.want)};
    }
  }
  return {true, fmt("%zu words round-tripped (%zu with hyphenated markers); "
                    "3 reference encodings exact",
                    words.size(), hyphenated)};
}

Outcome check_crf_oracle() {
  Rng rng(5);
  double max_logz_dev = 0.0;
  double max_score_dev = 0.0;
  for (int instance = 0; instance < 200; ++instance) {
    const std::size_t steps = 1 + static_cast<std::size_t>(instance % 6);
    const std::size_t n = 3;
    CrfLayer layer(n);
    for (Tensor* t : {&layer.chain, &layer.bias, &layer.left, &layer.right}) {
      for (std::size_t i = 0; i < t->size(); ++i) {
        t->data()[i] = rng.uniform(-1.0, 1.0);
      }
    }
    Tensor emissions(steps, n);
    for (std::size_t i = 0; i < emissions.size(); ++i) {
      emissions.data()[i] = rng.uniform(-2.0, 2.0);
    }

    // Brute force over all n^T paths.
    std::size_t total = 1;
    for (std::size_t t = 0; t < steps; ++t) total *= n;
    double best_score = -1e300;
    std::vector<int> best_path;
    double max_term = -1e300;
    std::vector<double> scores(total);
    std::vector<int> path(steps);
    for (std::size_t code = 0; code < total; ++code) {
      std::size_t rest = code;
      for (std::size_t t = 0; t < steps; ++t) {
        path[t] = static_cast<int>(rest % n);
        rest /= n;
      }
      const double score = crf_sequence_score(emissions, path, layer);
      scores[code] = score;
      max_term = std::max(max_term, score);
      if (score > best_score) {
        best_score = score;
        best_path = path;
      }
    }
    double sum = 0.0;
    for (double score : scores) sum += std::exp(score - max_term);
    const double brute_logz = max_term + std::log(sum);

    const double logz = crf_log_partition(emissions, layer);
    max_logz_dev = std::max(max_logz_dev, std::abs(logz - brute_logz));
    const auto [viterbi_path, viterbi_score] = viterbi_decode(emissions, layer);
    max_score_dev =
        std::max(max_score_dev, std::abs(viterbi_score - best_score));
    if (viterbi_path != best_path) {
      return {false, fmt("instance %d: viterbi path differs from brute force",
                         instance)};
    }
    if (std::abs(logz - brute_logz) > 1e-8) {
      return {false, fmt("instance %d: |logZ - brute| = %.3e > 1e-8", instance,
                         std::abs(logz - brute_logz))};
    }
  }
  return {true, fmt("200 instances, T<=6: max |logZ dev| = %.2e, max "
                    "|viterbi score dev| = %.2e, all paths exact",
                    max_logz_dev, max_score_dev)};
}

// Exhaustive central-difference sweep; returns the worst relative error.
template <typename Model, typename Batch>
double max_grad_rel_error(Model& model, const Batch& batch) {
  model.zero_grads();
  model.forward_backward(batch, true);
  const double h = 1e-5;
  double worst = 0.0;
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
      const double rel =
          std::abs(analytic - numeric) /
          std::max(1e-6, std::abs(analytic) + std::abs(numeric));
      worst = std::max(worst, rel);
    }
  }
  return worst;
}

Outcome check_gradients() {
  const auto words = parse_corpus("ke\nte nyi di e\nchü ü mo -u\nmo ko we\n");
  std::string detail;
  bool pass = true;

  std::vector<TagExample> tag_examples;
  for (const auto& w : words) tag_examples.push_back(make_tag_example(w));
  const TagBatch tag_batch = make_tag_batch(tag_examples, 0,
                                            tag_examples.size());
  TaggerDims dims;
  dims.embed = 3;
  dims.hidden = 4;
  for (TaggerKind kind :
       {TaggerKind::kLstm, TaggerKind::kBlstm, TaggerKind::kBlstmCrf}) {
    TaggerModel model(kind, dims, 17);
    const double worst = max_grad_rel_error(model, tag_batch);
    pass = pass && worst < 1e-4;
    detail += fmt("%s=%.1e ", to_string(kind).c_str(), worst);
  }

  std::vector<SeqExample> seq_examples;
  for (const auto& w : words) seq_examples.push_back(make_seq_example(w));
  const SeqBatch seq_batch = make_seq_batch(seq_examples, 0,
                                            seq_examples.size());
  Seq2SeqDims sdims;
  sdims.embed = 2;
  sdims.units = 4;
  sdims.attn = 3;
  sdims.tgt_embed = 2;
  Seq2SeqModel seq2seq(sdims, 17);
  const double worst = max_grad_rel_error(seq2seq, seq_batch);
  pass = pass && worst < 1e-4;
  detail += fmt("seq2seq=%.1e", worst);

  return {pass, detail + (pass ? " (all < 1e-4)" : " (TOLERANCE EXCEEDED)")};
}

Outcome check_attention_traces() {
  Seq2SeqDims dims;
  dims.embed = 8;
  dims.units = 12;
  dims.attn = 10;
  dims.tgt_embed = 6;
  Seq2SeqModel model(dims, 9);
  const auto words = synthesize_corpus(default_synthesis_config(1000, 13));
  double max_dev = 0.0;
  std::size_t rows_seen = 0;
  for (const auto& word : words) {
    const DecodeResult result = model.decode_greedy(word.surface);
    const AttentionTrace& trace = result.trace;
    if (!trace.tags.empty() && trace.tags.size() != trace.weights.rows()) {
      return {false, "trace row count does not match emitted tags"};
    }
    for (std::size_t t = 0; t < trace.tags.size(); ++t) {
      double sum = 0.0;
      for (std::size_t j = 0; j < trace.source.size(); ++j) {
        sum += trace.weights(t, j);
      }
      max_dev = std::max(max_dev, std::abs(sum - 1.0));
      ++rows_seen;
    }
  }
  const bool pass = max_dev <= 1e-9;
  return {pass, fmt("%zu decodes, %zu attention rows, max |sum-1| = %.2e "
                    "(tolerance 1e-9)",
                    words.size(), rows_seen, max_dev)};
}

Outcome check_end_to_end() {
  const Experiment& exp = experiment();
  if (exp.metrics.size() < 5) {
    return {false, "fewer than five epochs recorded"};
  }
  const double early = exp.metrics[4].valid_acc;
  const double final_acc = exp.metrics.back().valid_acc;
  const bool acc_ok = exp.word_accuracy_pct >= 95.0;
  const bool ramp_ok = early >= 0.9 * final_acc;
  return {acc_ok && ramp_ok,
          fmt("10000 words, seed %llu, 40 epochs batch 128 lr 0.001: "
              "held-out word accuracy %.2f%% (need >= 95); epoch-5 tag "
              "accuracy %.4f vs final %.4f (need >= 90%% of final); best "
              "epoch %zu",
              static_cast<unsigned long long>(kExperimentSeed),
              exp.word_accuracy_pct, early, final_acc, exp.best_epoch)};
}

Outcome check_model_ordering() {
  const Experiment& exp = experiment();

  TaggerTrainResult lstm =
      train_tagger(TaggerKind::kLstm, exp.parts.train, exp.parts.valid,
                   reference_config(40, 128));
  const double lstm_acc = heldout_accuracy(lstm.model, exp.parts.test);

  // Full 40-epoch seq2seq training runs to hours on one desktop core, so
  // the reported run uses a 2,000-word subset for 5 epochs at the full
  // architecture and reference batch size.
  const std::vector<SyllabifiedWord> subset(
      exp.parts.train.begin(), exp.parts.train.begin() + 2000);
  Seq2SeqTrainResult seq =
      train_seq2seq(subset, exp.parts.valid, reference_config(5, 16));
  std::vector<TagSequence> predictions;
  predictions.reserve(exp.parts.test.size());
  for (const auto& w : exp.parts.test) {
    predictions.push_back(seq.model.decode_greedy(w.surface).tags);
  }
  const double seq_acc =
      word_accuracy(predictions, exp.parts.test).accuracy;

  const bool vs_lstm = exp.word_accuracy_pct >= lstm_acc;
  const bool vs_seq = exp.word_accuracy_pct >= seq_acc;
  return {true,
          fmt("soft, reported not gated: blstm=%.2f%% lstm=%.2f%% "
              "seq2seq=%.2f%% (seed %llu; lstm 40 epochs batch 128; seq2seq "
              "2000-word subset, 5 epochs, batch 16); blstm>=lstm %s, "
              "blstm>=seq2seq %s",
              exp.word_accuracy_pct, lstm_acc, seq_acc,
              static_cast<unsigned long long>(kExperimentSeed),
              vs_lstm ? "holds" : "DOES NOT HOLD",
              vs_seq ? "holds" : "DOES NOT HOLD")};
}

}  // namespace

int main(int argc, char** argv) {
  std::string only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      only = argv[++i];
    } else if (arg.rfind("--only=", 0) == 0) {
      only = arg.substr(7);
    } else {
      std::fprintf(stderr, "usage: acceptance [--only SUBSTRING]\n");
      return 2;
    }
  }

  const std::vector<std::pair<const char*, std::function<Outcome()>>>
      criteria = {
          {"accuracy-arithmetic", check_accuracy_arithmetic},
          {"parameter-counts", check_parameter_counts},
          {"split-sizes", check_split_sizes},
          {"tagging-codec", check_tagging_codec},
          {"crf-oracle", check_crf_oracle},
          {"gradient-checks", check_gradients},
          {"attention-traces", check_attention_traces},
          {"end-to-end-synthetic", check_end_to_end},
          {"model-ordering", check_model_ordering},
      };

  int failures = 0;
  int ran = 0;
  for (const auto& [name, fn] : criteria) {
    if (!only.empty() && std::string(name).find(only) == std::string::npos) {
      continue;
    }
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = fn();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("%s %s: %s (%.1fs)\n", outcome.pass ? "PASS" : "FAIL", name,
                outcome.detail.c_str(), seconds);
    std::fflush(stdout);
    if (!outcome.pass) ++failures;
  }
  if (ran == 0) {
    std::fprintf(stderr, "no criteria match '%s'\n", only.c_str());
    return 2;
  }
  return failures == 0 ? 0 : 1;
}
