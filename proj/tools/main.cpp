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

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tenyisyl/baseline.hpp"
#include "tenyisyl/checkpoint.hpp"
#include "tenyisyl/corpus.hpp"
#include "tenyisyl/eval.hpp"
#include "tenyisyl/nn.hpp"
#include "tenyisyl/phonotactics.hpp"
#include "tenyisyl/seq2seq.hpp"
#include "tenyisyl/synth.hpp"
#include "tenyisyl/tagging.hpp"
#include "tenyisyl/text.hpp"

namespace {

using namespace tenyisyl;

constexpr const char* kToolkitVersion = "0.1.0";

// Exit codes: 0 ok, 1 runtime error, 2 input validation error. Anything the
// user handed us that is malformed or inconsistent raises InputError.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw InputError("cannot read '" + path + "'");
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
  out.flush();
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
}

std::vector<SyllabifiedWord> load_corpus(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return parse_corpus(text);
  } catch (const CorpusError& e) {
    throw InputError(path + ": " + e.what());
  }
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw std::runtime_error("cannot create output directory '" + dir + "'");
  }
}

class Timer {
 public:
  double seconds() const {
    const auto now = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(now - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

// Every artifact-producing command writes exactly one of these next to its
// outputs, so any artifact can be regenerated from the recorded inputs.
void write_manifest(const std::string& out_dir, const std::string& command,
                    const nlohmann::json& config, std::uint64_t seed,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs,
                    double wall_seconds) {
  const nlohmann::json manifest = {
      {"command", command},         {"config", config},
      {"seed", seed},               {"inputs", inputs},
      {"outputs", outputs},         {"version", kToolkitVersion},
      {"wall_time_seconds", wall_seconds}};
  write_text_file(out_dir + "/manifest.json", manifest.dump(2) + "\n");
}

SplitSpec parse_split_spec(const std::string& text, std::uint64_t seed) {
  std::vector<double> parts;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError("bad split component '" + item + "' in '" + text + "'");
    }
  }
  if (parts.size() != 3) {
    throw InputError("split must have three components, got '" + text + "'");
  }
  const double sum = parts[0] + parts[1] + parts[2];
  double scale = 0.0;
  if (std::abs(sum - 100.0) < 1e-9) {
    scale = 1.0 / 100.0;
  } else if (std::abs(sum - 1.0) < 1e-9) {
    scale = 1.0;
  } else {
    throw InputError("split components must sum to 100 (or 1), got '" + text +
                     "'");
  }
  for (double p : parts) {
    if (p < 0.0) throw InputError("negative split component in '" + text + "'");
  }
  SplitSpec spec;
  spec.train_frac = parts[0] * scale;
  spec.valid_frac = parts[1] * scale;
  spec.test_frac = parts[2] * scale;
  spec.seed = seed;
  return spec;
}

std::vector<std::pair<std::string, std::size_t>> sorted_by_count(
    const std::map<std::string, std::size_t>& histogram) {
  std::vector<std::pair<std::string, std::size_t>> rows(histogram.begin(),
                                                        histogram.end());
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return rows;
}

// ---------------------------------------------------------------------------
// Shared prediction plumbing.

struct LoadedModel {
  std::string arch;
  std::unique_ptr<TaggerModel> tagger;
  std::unique_ptr<Seq2SeqModel> seq2seq;
};

LoadedModel load_model(const std::string& path) {
  Checkpoint ckpt;
  try {
    ckpt = load_checkpoint(path);
  } catch (const std::exception& e) {
    throw InputError(std::string("bad checkpoint: ") + e.what());
  }
  LoadedModel model;
  model.arch = ckpt.arch;
  try {
    if (ckpt.arch == "seq2seq") {
      model.seq2seq =
          std::make_unique<Seq2SeqModel>(seq2seq_from_checkpoint(ckpt));
    } else {
      model.tagger =
          std::make_unique<TaggerModel>(tagger_from_checkpoint(ckpt));
    }
  } catch (const std::exception& e) {
    throw InputError(std::string("bad checkpoint: ") + e.what());
  }
  return model;
}

std::vector<TagSequence> predict_tags(LoadedModel& model,
                                      const std::vector<SyllabifiedWord>& words,
                                      std::vector<DecodeResult>* decodes) {
  std::vector<TagSequence> predictions;
  predictions.reserve(words.size());
  if (model.tagger) {
    std::vector<TagExample> examples;
    examples.reserve(words.size());
    for (const auto& w : words) examples.push_back(make_tag_example(w));
    predictions = model.tagger->predict(examples);
  } else {
    for (const auto& w : words) {
      DecodeResult result = model.seq2seq->decode_greedy(w.surface);
      predictions.push_back(result.tags);
      if (decodes != nullptr) decodes->push_back(std::move(result));
    }
  }
  return predictions;
}

// ---------------------------------------------------------------------------
// stats

struct StatsOpts {
  std::string corpus;
  std::string out;
  std::size_t top_n = 50;
};

void run_stats(const StatsOpts& opts) {
  Timer timer;
  const std::vector<SyllabifiedWord> words = load_corpus(opts.corpus);
  if (words.empty()) throw InputError(opts.corpus + ": corpus is empty");
  ensure_out_dir(opts.out);

  const CorpusStats stats = corpus_stats(words);
  std::set<std::u32string> distinct;
  std::size_t occurrences = 0;
  for (const auto& w : words) {
    for (const auto& syl : w.syllables()) {
      distinct.insert(syl);
      ++occurrences;
    }
  }
  const nlohmann::json stats_json = {
      {"word_count", stats.word_count},
      {"min_len", stats.min_len},
      {"max_len", stats.max_len},
      {"mean_len", stats.mean_len},
      {"syllable_occurrences", occurrences},
      {"distinct_syllables", distinct.size()}};
  write_text_file(opts.out + "/stats.json", stats_json.dump(2) + "\n");

  std::string types_csv = "pattern,count\n";
  for (const auto& [pattern, count] :
       sorted_by_count(syllable_type_histogram(words))) {
    types_csv += pattern + ',' + std::to_string(count) + '\n';
  }
  write_text_file(opts.out + "/cv_types.csv", types_csv);

  const PositionalStats positional = positional_histogram(words);
  std::string pos_csv = "position,pattern,count\n";
  const std::pair<const char*, const std::map<std::string, std::size_t>*>
      sections[] = {{"beginning", &positional.beginning},
                    {"middle", &positional.middle},
                    {"end", &positional.end}};
  for (const auto& [name, histogram] : sections) {
    for (const auto& [pattern, count] : sorted_by_count(*histogram)) {
      pos_csv += std::string(name) + ',' + pattern + ',' +
                 std::to_string(count) + '\n';
    }
  }
  write_text_file(opts.out + "/cv_positions.csv", pos_csv);

  std::string top_csv = "rank,syllable,count\n";
  std::size_t rank = 0;
  for (const auto& [syllable, count] : top_syllables(words, opts.top_n)) {
    top_csv += std::to_string(++rank) + ',' + utf8_encode(syllable) + ',' +
               std::to_string(count) + '\n';
  }
  write_text_file(opts.out + "/top_syllables.csv", top_csv);

  write_manifest(opts.out, "stats",
                 {{"corpus", opts.corpus}, {"top", opts.top_n}},
                 /*seed=*/0, {opts.corpus},
                 {"stats.json", "cv_types.csv", "cv_positions.csv",
                  "top_syllables.csv"},
                 timer.seconds());
  std::printf("%zu words, mean length %.2f; wrote 4 reports to %s\n",
              stats.word_count, stats.mean_len, opts.out.c_str());
}

// ---------------------------------------------------------------------------
// synth

struct SynthOpts {
  std::string out;
  std::string config_file;
  std::size_t count = 10000;
  std::uint64_t seed = 0;
  bool count_set = false;
  bool seed_set = false;
};

std::vector<std::pair<std::u32string, double>> parse_weight_table(
    const nlohmann::json& entries, const char* what) {
  std::vector<std::pair<std::u32string, double>> table;
  for (const auto& entry : entries) {
    if (!entry.is_array() || entry.size() != 2) {
      throw InputError(std::string(what) +
                       " entries must be [string, weight] pairs");
    }
    table.emplace_back(canonicalize(utf8_decode(entry[0].get<std::string>())),
                       entry[1].get<double>());
  }
  return table;
}

void run_synth(const SynthOpts& opts) {
  Timer timer;
  SynthesisConfig cfg = default_synthesis_config(opts.count, opts.seed);
  if (!opts.config_file.empty()) {
    nlohmann::json json;
    try {
      json = nlohmann::json::parse(read_text_file(opts.config_file));
      if (json.contains("word_count")) cfg.word_count = json["word_count"];
      if (json.contains("seed")) cfg.seed = json["seed"];
      if (json.contains("target_mean_len")) {
        cfg.target_mean_len = json["target_mean_len"];
      }
      if (json.contains("marker_prob")) cfg.marker_prob = json["marker_prob"];
      if (json.contains("min_syllables")) {
        cfg.min_syllables = json["min_syllables"];
      }
      if (json.contains("max_syllables")) {
        cfg.max_syllables = json["max_syllables"];
      }
      if (json.contains("syllables")) {
        cfg.syllable_table = parse_weight_table(json["syllables"], "syllables");
      }
      if (json.contains("markers")) {
        cfg.marker_table = parse_weight_table(json["markers"], "markers");
      }
    } catch (const InputError&) {
      throw;
    } catch (const std::exception& e) {
      throw InputError(opts.config_file + ": " + e.what());
    }
    // Explicit flags outrank the config file.
    if (opts.count_set) cfg.word_count = opts.count;
    if (opts.seed_set) cfg.seed = opts.seed;
  }

  std::vector<SyllabifiedWord> words;
  try {
    words = synthesize_corpus(cfg);
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("bad synthesis config: ") + e.what());
  }
  ensure_out_dir(opts.out);
  write_text_file(opts.out + "/corpus.txt", format_corpus(words));
  write_manifest(opts.out, "synth",
                 {{"count", cfg.word_count},
                  {"config_file", opts.config_file},
                  {"target_mean_len", cfg.target_mean_len},
                  {"marker_prob", cfg.marker_prob},
                  {"min_syllables", cfg.min_syllables},
                  {"max_syllables", cfg.max_syllables}},
                 cfg.seed,
                 opts.config_file.empty()
                     ? std::vector<std::string>{}
                     : std::vector<std::string>{opts.config_file},
                 {"corpus.txt"}, timer.seconds());
  std::printf("wrote %zu synthetic words to %s/corpus.txt\n", words.size(),
              opts.out.c_str());
}

// ---------------------------------------------------------------------------
// split

struct SplitOpts {
  std::string corpus;
  std::string out;
  std::string split = "80:10:10";
  std::uint64_t seed = 0;
};

void run_split(const SplitOpts& opts) {
  Timer timer;
  const SplitSpec spec = parse_split_spec(opts.split, opts.seed);
  const CorpusSplit parts = split(load_corpus(opts.corpus), spec);
  ensure_out_dir(opts.out);
  write_text_file(opts.out + "/train.txt", format_corpus(parts.train));
  write_text_file(opts.out + "/valid.txt", format_corpus(parts.valid));
  write_text_file(opts.out + "/test.txt", format_corpus(parts.test));
  write_manifest(opts.out, "split",
                 {{"corpus", opts.corpus}, {"split", opts.split}}, opts.seed,
                 {opts.corpus}, {"train.txt", "valid.txt", "test.txt"},
                 timer.seconds());
  std::printf("split %zu words into %zu/%zu/%zu\n",
              parts.train.size() + parts.valid.size() + parts.test.size(),
              parts.train.size(), parts.valid.size(), parts.test.size());
}

// ---------------------------------------------------------------------------
// train

struct TrainOpts {
  std::string corpus;
  std::string model = "blstm";
  std::string out;
  std::string split = "80:10:10";
  std::size_t epochs = 40;
  std::size_t batch_size = 0;  // 0 = model default (128; 16 for seq2seq)
  double lr = 0.001;
  std::uint64_t seed = 0;
};

void run_train(const TrainOpts& opts) {
  Timer timer;
  if (opts.model == "baseline") {
    throw InputError("the baseline needs no training; use it directly with "
                     "'syllabify --model baseline'");
  }
  const bool is_seq2seq = opts.model == "seq2seq";
  if (!is_seq2seq) {
    try {
      tagger_kind_from_string(opts.model);
    } catch (const std::exception& e) {
      throw InputError(e.what());
    }
  }

  const std::vector<SyllabifiedWord> words = load_corpus(opts.corpus);
  const SplitSpec spec = parse_split_spec(opts.split, opts.seed);
  const CorpusSplit parts = split(words, spec);
  if (parts.train.empty() || parts.valid.empty()) {
    throw InputError("corpus too small for the requested split");
  }

  TrainConfig cfg;
  cfg.epochs = opts.epochs;
  cfg.batch_size =
      opts.batch_size != 0 ? opts.batch_size : (is_seq2seq ? 16 : 128);
  cfg.lr = opts.lr;
  cfg.seed = opts.seed;

  ensure_out_dir(opts.out);
  Checkpoint ckpt;
  std::vector<EpochMetrics> metrics;
  std::size_t best_epoch = 0;
  std::size_t parameters = 0;
  LoadedModel trained;
  if (is_seq2seq) {
    Seq2SeqTrainResult result = train_seq2seq(parts.train, parts.valid, cfg);
    ckpt = to_checkpoint(result.model);
    metrics = std::move(result.metrics);
    best_epoch = result.best_epoch;
    parameters = result.model.parameter_count();
    trained.seq2seq = std::make_unique<Seq2SeqModel>(std::move(result.model));
  } else {
    TaggerTrainResult result = train_tagger(
        tagger_kind_from_string(opts.model), parts.train, parts.valid, cfg);
    ckpt = to_checkpoint(result.model);
    metrics = std::move(result.metrics);
    best_epoch = result.best_epoch;
    parameters = result.model.parameter_count();
    trained.tagger = std::make_unique<TaggerModel>(std::move(result.model));
  }

  const std::string ckpt_name = opts.model + ".ckpt";
  save_checkpoint(ckpt, opts.out + "/" + ckpt_name);
  write_text_file(opts.out + "/metrics.csv", metrics_csv(metrics));

  std::vector<std::string> outputs = {ckpt_name, "metrics.csv"};
  std::printf("%s: %zu parameters, best epoch %zu of %zu\n",
              opts.model.c_str(), parameters, best_epoch, metrics.size());
  if (!parts.test.empty()) {
    const std::vector<TagSequence> predictions =
        predict_tags(trained, parts.test, nullptr);
    const EvalReport report = word_accuracy(predictions, parts.test);
    write_text_file(opts.out + "/heldout.json", report_json(report));
    outputs.push_back("heldout.json");
    std::printf("held-out word accuracy: %.2f%% (%zu/%zu)\n", report.accuracy,
                report.correct, report.total);
  }

  write_manifest(opts.out, "train",
                 {{"corpus", opts.corpus},
                  {"model", opts.model},
                  {"epochs", cfg.epochs},
                  {"batch_size", cfg.batch_size},
                  {"lr", cfg.lr},
                  {"split", opts.split}},
                 opts.seed, {opts.corpus}, outputs, timer.seconds());
}

// ---------------------------------------------------------------------------
// eval

struct EvalOpts {
  std::string checkpoint;
  std::string corpus;
  std::string out;
  std::size_t traces = 5;
};

std::string trace_file_name(const char* label, std::size_t rank,
                            const std::string& word) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%03zu", rank);
  return std::string("trace_") + label + "_" + buffer + "_" + word + ".csv";
}

void run_eval(const EvalOpts& opts) {
  Timer timer;
  LoadedModel model = load_model(opts.checkpoint);
  const std::vector<SyllabifiedWord> golds = load_corpus(opts.corpus);
  if (golds.empty()) throw InputError(opts.corpus + ": corpus is empty");
  ensure_out_dir(opts.out);

  std::vector<DecodeResult> decodes;
  const std::vector<TagSequence> predictions =
      predict_tags(model, golds, &decodes);
  const EvalReport report = word_accuracy(predictions, golds);
  write_text_file(opts.out + "/report.json", report_json(report));
  write_text_file(opts.out + "/errors.csv", report_csv(report));
  std::vector<std::string> outputs = {"report.json", "errors.csv"};

  if (model.seq2seq != nullptr && opts.traces > 0) {
    // Inspection set: the first k wrong and k correct words.
    std::set<std::size_t> wrong;
    for (const ErrorRow& row : report.errors) wrong.insert(row.index);
    std::size_t wrong_done = 0;
    std::size_t correct_done = 0;
    for (std::size_t i = 0; i < golds.size(); ++i) {
      const bool is_wrong = wrong.count(i) != 0;
      std::size_t& done = is_wrong ? wrong_done : correct_done;
      if (done >= opts.traces) continue;
      ++done;
      const std::string name =
          trace_file_name(is_wrong ? "error" : "correct", done,
                          utf8_encode(golds[i].surface));
      write_text_file(opts.out + "/" + name, decodes[i].trace.to_csv());
      outputs.push_back(name);
      if (wrong_done >= opts.traces && correct_done >= opts.traces) break;
    }
  }

  write_manifest(opts.out, "eval",
                 {{"checkpoint", opts.checkpoint},
                  {"corpus", opts.corpus},
                  {"traces", opts.traces},
                  {"model", model.arch}},
                 /*seed=*/0, {opts.checkpoint, opts.corpus}, outputs,
                 timer.seconds());
  std::printf("%s word accuracy: %.2f%% (%zu/%zu)\n", model.arch.c_str(),
              report.accuracy, report.correct, report.total);
}

// ---------------------------------------------------------------------------
// syllabify

struct SyllabifyOpts {
  std::string checkpoint;
  std::string model;
  std::string corpus;  // baseline inventory source
};

void run_syllabify(const SyllabifyOpts& opts) {
  const bool use_baseline = opts.model == "baseline";
  if (use_baseline == !opts.checkpoint.empty() ||
      (!use_baseline && !opts.model.empty() && opts.checkpoint.empty())) {
    throw InputError(
        "pass either --checkpoint FILE or --model baseline --corpus FILE");
  }

  SyllableInventory inventory;
  LoadedModel model;
  if (use_baseline) {
    if (opts.corpus.empty()) {
      throw InputError("--model baseline needs --corpus for its inventory");
    }
    inventory = build_inventory(load_corpus(opts.corpus));
  } else {
    model = load_model(opts.checkpoint);
  }

  // One word per line in, one syllabified word per line out; words the
  // segmenter cannot handle come back as "?<word>" sentinel lines.
  std::string line;
  while (std::getline(std::cin, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      const std::u32string surface = canonicalize(utf8_decode(line));
      SyllabifiedWord word;
      if (use_baseline) {
        std::optional<SyllabifiedWord> segmented = segment(surface, inventory);
        if (!segmented) throw InputError("no segmentation");
        word = std::move(*segmented);
      } else {
        const TagSequence tags =
            model.tagger ? model.tagger->predict_one(surface)
                         : model.seq2seq->decode_greedy(surface).tags;
        word = decode_tags(surface, tags);
      }
      std::cout << format_word(word) << '\n';
    } catch (const std::exception&) {
      std::cout << '?' << line << '\n';
    }
  }
}

// ---------------------------------------------------------------------------
// compare

struct CompareOpts {
  std::vector<std::string> checkpoints;
  std::string corpus;
  std::string out;
};

void run_compare(const CompareOpts& opts) {
  Timer timer;
  if (opts.checkpoints.size() < 2) {
    throw InputError("compare needs at least two --checkpoint files");
  }
  const std::vector<SyllabifiedWord> golds = load_corpus(opts.corpus);
  if (golds.empty()) throw InputError(opts.corpus + ": corpus is empty");
  ensure_out_dir(opts.out);

  std::vector<std::pair<std::string, EvalReport>> reports;
  std::set<std::string> used_names;
  std::vector<std::string> outputs;
  for (const std::string& path : opts.checkpoints) {
    LoadedModel model = load_model(path);
    std::string name = std::filesystem::path(path).stem().string();
    while (!used_names.insert(name).second) name += "_2";
    const std::vector<TagSequence> predictions =
        predict_tags(model, golds, nullptr);
    reports.emplace_back(name, word_accuracy(predictions, golds));
    const std::string dump = "errors_" + name + ".csv";
    write_text_file(opts.out + "/" + dump, report_csv(reports.back().second));
    outputs.push_back(dump);
    std::printf("%s: %.2f%% (%zu/%zu)\n", name.c_str(),
                reports.back().second.accuracy, reports.back().second.correct,
                reports.back().second.total);
  }

  const ComparisonTable table = compare_models(reports);
  write_text_file(opts.out + "/comparison.csv", comparison_csv(table));
  outputs.push_back("comparison.csv");

  std::vector<std::string> inputs = opts.checkpoints;
  inputs.push_back(opts.corpus);
  write_manifest(opts.out, "compare",
                 {{"corpus", opts.corpus}, {"checkpoints", opts.checkpoints}},
                 /*seed=*/0, inputs, outputs, timer.seconds());
  std::printf("%zu disputed words written to %s/comparison.csv\n",
              table.rows.size(), opts.out.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tenyidie syllabification toolkit"};
  app.require_subcommand(1);

  auto stats_opts = std::make_shared<StatsOpts>();
  CLI::App* stats = app.add_subcommand(
      "stats", "Corpus statistics, CV histograms, and ranked syllables");
  stats->add_option("--corpus", stats_opts->corpus, "Corpus file")->required();
  stats->add_option("--out", stats_opts->out, "Output directory")->required();
  stats->add_option("--top", stats_opts->top_n, "Ranked syllable count");
  stats->callback([stats_opts] { run_stats(*stats_opts); });

  auto synth_opts = std::make_shared<SynthOpts>();
  CLI::App* synth =
      app.add_subcommand("synth", "Generate a synthetic corpus");
  synth->add_option("--out", synth_opts->out, "Output directory")->required();
  CLI::Option* count_opt =
      synth->add_option("--count", synth_opts->count, "Words to generate");
  CLI::Option* synth_seed =
      synth->add_option("--seed", synth_opts->seed, "Generator seed");
  synth->add_option("--synth-config", synth_opts->config_file,
                    "JSON overrides for the generator");
  synth->callback([synth_opts, count_opt, synth_seed] {
    synth_opts->count_set = count_opt->count() > 0;
    synth_opts->seed_set = synth_seed->count() > 0;
    run_synth(*synth_opts);
  });

  auto split_opts = std::make_shared<SplitOpts>();
  CLI::App* split_cmd =
      app.add_subcommand("split", "Shuffle and partition a corpus");
  split_cmd->add_option("--corpus", split_opts->corpus, "Corpus file")
      ->required();
  split_cmd->add_option("--out", split_opts->out, "Output directory")
      ->required();
  split_cmd->add_option("--split", split_opts->split,
                        "train:valid:test percentages");
  split_cmd->add_option("--seed", split_opts->seed, "Shuffle seed");
  split_cmd->callback([split_opts] { run_split(*split_opts); });

  auto train_opts = std::make_shared<TrainOpts>();
  CLI::App* train =
      app.add_subcommand("train", "Split a corpus and train a model");
  train->add_option("--corpus", train_opts->corpus, "Corpus file")->required();
  train
      ->add_option("--model", train_opts->model,
                   "lstm, blstm, blstm-crf, or seq2seq")
      ->check(CLI::IsMember({"lstm", "blstm", "blstm-crf", "seq2seq"}));
  train->add_option("--out", train_opts->out, "Output directory")->required();
  train->add_option("--epochs", train_opts->epochs, "Training epochs");
  train->add_option("--batch-size", train_opts->batch_size,
                    "Batch size (default 128; 16 for seq2seq)");
  train->add_option("--lr", train_opts->lr, "Adam learning rate");
  train->add_option("--seed", train_opts->seed, "Run seed");
  train->add_option("--split", train_opts->split,
                    "train:valid:test percentages");
  train->callback([train_opts] { run_train(*train_opts); });

  auto eval_opts = std::make_shared<EvalOpts>();
  CLI::App* eval_cmd =
      app.add_subcommand("eval", "Score a checkpoint against a gold corpus");
  eval_cmd->add_option("--checkpoint", eval_opts->checkpoint, "Model file")
      ->required();
  eval_cmd->add_option("--corpus", eval_opts->corpus, "Gold corpus")
      ->required();
  eval_cmd->add_option("--out", eval_opts->out, "Output directory")
      ->required();
  eval_cmd->add_option("--traces", eval_opts->traces,
                       "Attention traces per outcome (seq2seq only)");
  eval_cmd->callback([eval_opts] { run_eval(*eval_opts); });

  auto syl_opts = std::make_shared<SyllabifyOpts>();
  CLI::App* syllabify = app.add_subcommand(
      "syllabify", "Read words on stdin, write syllabified words on stdout");
  syllabify->add_option("--checkpoint", syl_opts->checkpoint, "Model file");
  syllabify->add_option("--model", syl_opts->model,
                        "'baseline' for the dictionary segmenter");
  syllabify->add_option("--corpus", syl_opts->corpus,
                        "Inventory corpus for the baseline");
  syllabify->callback([syl_opts] { run_syllabify(*syl_opts); });

  auto compare_opts = std::make_shared<CompareOpts>();
  CLI::App* compare = app.add_subcommand(
      "compare", "Cross-model error table over a shared gold corpus");
  compare
      ->add_option("--checkpoint", compare_opts->checkpoints,
                   "Model files (repeat, at least two)")
      ->required();
  compare->add_option("--corpus", compare_opts->corpus, "Gold corpus")
      ->required();
  compare->add_option("--out", compare_opts->out, "Output directory")
      ->required();
  compare->callback([compare_opts] { run_compare(*compare_opts); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
