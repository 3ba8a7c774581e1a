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

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "tenyisyl/corpus.hpp"
#include "tenyisyl/tagging.hpp"

namespace tenyisyl {

/// One incorrectly syllabified word. `predicted` is the model's raw tag
/// string, kept verbatim even when its length does not match the word.
struct ErrorRow {
  std::size_t index = 0;  // position in the evaluated list
  std::string word;       // surface form, UTF-8
  std::string parse;      // gold syllables joined with '+'
  std::string pattern;    // space-joined CV templates of the gold parse
  std::string actual;     // gold tag string
  std::string predicted;  // emitted tag string, verbatim
};

/// Word-level accuracy summary. `accuracy` is a percentage rounded half-up
/// to two decimals; an empty evaluation reports 0.00.
struct EvalReport {
  std::size_t total = 0;
  std::size_t correct = 0;
  double accuracy = 0.0;
  std::vector<ErrorRow> errors;
};

/// 100 * correct / total rounded half-up to two decimals; 0.0 when total
/// is zero. Throws std::invalid_argument if correct exceeds total.
double accuracy_percent(std::size_t correct, std::size_t total);

/// Scores aligned predictions against gold words. A word counts correct iff
/// its predicted tag string equals the gold tags exactly. Throws
/// std::invalid_argument on a length mismatch between the lists.
EvalReport word_accuracy(const std::vector<TagSequence>& predictions,
                         const std::vector<SyllabifiedWord>& golds);

/// The error rows alone, one per incorrect word, in input order.
std::vector<ErrorRow> error_rows(const std::vector<TagSequence>& predictions,
                                 const std::vector<SyllabifiedWord>& golds);

/// One model's tags for a disputed word. `correct` iff `tags` equals the
/// gold tag string.
struct ComparisonCell {
  std::string tags;
  bool correct = false;
};

struct ComparisonRow {
  std::size_t index = 0;
  std::string word;
  std::string actual;
  std::vector<ComparisonCell> cells;  // aligned with ComparisonTable::models
};

/// Cross-model error table: one row per word that at least one model got
/// wrong, every model's output shown. Models that scored the word correctly
/// are reconstructed from the gold tags.
struct ComparisonTable {
  std::vector<std::string> models;
  std::vector<ComparisonRow> rows;
};

/// Joins reports produced over the same test set. Requires at least two
/// reports, equal totals, and agreement on word surface and gold tags
/// wherever error rows overlap; throws std::invalid_argument otherwise.
ComparisonTable compare_models(
    const std::vector<std::pair<std::string, EvalReport>>& reports);

/// Error table as CSV: index,word,parse,pattern,actual,predicted. Corpus
/// words cannot contain commas or quotes, so no field needs escaping.
std::string report_csv(const EvalReport& report);

/// Full report as a JSON object {total, correct, accuracy, errors:[...]}.
std::string report_json(const EvalReport& report);

/// Comparison table as CSV with two columns per model: "<name>_tags" and a
/// boolean "<name>_correct".
std::string comparison_csv(const ComparisonTable& table);

}  // namespace tenyisyl
