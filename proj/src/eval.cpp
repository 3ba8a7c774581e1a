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

#include "tenyisyl/eval.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "json.hpp"
#include "tenyisyl/phonotactics.hpp"
#include "tenyisyl/text.hpp"

namespace tenyisyl {
namespace {

ErrorRow make_error_row(std::size_t index, const SyllabifiedWord& gold,
                        const TagSequence& actual,
                        const TagSequence& predicted) {
  ErrorRow row;
  row.index = index;
  row.word = utf8_encode(gold.surface);
  std::string parse;
  for (const std::u32string& syllable : gold.syllables()) {
    if (!parse.empty()) parse += '+';
    parse += utf8_encode(syllable);
  }
  row.parse = std::move(parse);
  row.pattern = cv_pattern_string(gold);
  row.actual = actual;
  row.predicted = predicted;
  return row;
}

}  // namespace

double accuracy_percent(std::size_t correct, std::size_t total) {
  if (correct > total) {
    throw std::invalid_argument("correct count exceeds total");
  }
  if (total == 0) return 0.0;
  const double percent = 100.0 * static_cast<double>(correct) /
                         static_cast<double>(total);
  return std::floor(percent * 100.0 + 0.5) / 100.0;
}

EvalReport word_accuracy(const std::vector<TagSequence>& predictions,
                         const std::vector<SyllabifiedWord>& golds) {
  if (predictions.size() != golds.size()) {
    throw std::invalid_argument("predictions and golds differ in length");
  }
  EvalReport report;
  report.total = golds.size();
  for (std::size_t i = 0; i < golds.size(); ++i) {
    const TagSequence actual = encode_tags(golds[i]);
    if (predictions[i] == actual) {
      ++report.correct;
    } else {
      report.errors.push_back(
          make_error_row(i, golds[i], actual, predictions[i]));
    }
  }
  report.accuracy = accuracy_percent(report.correct, report.total);
  return report;
}

std::vector<ErrorRow> error_rows(const std::vector<TagSequence>& predictions,
                                 const std::vector<SyllabifiedWord>& golds) {
  return word_accuracy(predictions, golds).errors;
}

ComparisonTable compare_models(
    const std::vector<std::pair<std::string, EvalReport>>& reports) {
  if (reports.size() < 2) {
    throw std::invalid_argument("comparison needs at least two reports");
  }
  const std::size_t total = reports.front().second.total;
  for (const auto& [name, report] : reports) {
    if (report.total != total) {
      throw std::invalid_argument("report totals differ: " + name);
    }
  }

  // Word identity and gold tags come from whichever reports mention the
  // index; any disagreement means the reports cover different test sets.
  std::map<std::size_t, ComparisonRow> rows;
  std::map<std::size_t, std::vector<char>> filled;
  for (std::size_t m = 0; m < reports.size(); ++m) {
    for (const ErrorRow& error : reports[m].second.errors) {
      auto [it, inserted] = rows.try_emplace(error.index);
      ComparisonRow& row = it->second;
      if (inserted) {
        row.index = error.index;
        row.word = error.word;
        row.actual = error.actual;
        row.cells.assign(reports.size(), ComparisonCell{});
        filled[error.index].assign(reports.size(), 0);
      } else if (row.word != error.word || row.actual != error.actual) {
        throw std::invalid_argument("reports disagree on the test set");
      }
      row.cells[m] = ComparisonCell{error.predicted, false};
      filled[error.index][m] = 1;
    }
  }

  ComparisonTable table;
  for (const auto& [name, report] : reports) {
    table.models.push_back(name);
    (void)report;
  }
  for (auto& [index, row] : rows) {
    const std::vector<char>& mask = filled[index];
    for (std::size_t m = 0; m < row.cells.size(); ++m) {
      // A model with no error row here scored the word correctly, so its
      // output is the gold tag string.
      if (!mask[m]) row.cells[m].tags = row.actual;
      row.cells[m].correct = row.cells[m].tags == row.actual;
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string report_csv(const EvalReport& report) {
  std::string csv = "index,word,parse,pattern,actual,predicted\n";
  for (const ErrorRow& row : report.errors) {
    csv += std::to_string(row.index);
    csv += ',' + row.word + ',' + row.parse + ',' + row.pattern + ',' +
           row.actual + ',' + row.predicted + '\n';
  }
  return csv;
}

std::string report_json(const EvalReport& report) {
  nlohmann::json errors = nlohmann::json::array();
  for (const ErrorRow& row : report.errors) {
    errors.push_back({{"index", row.index},
                      {"word", row.word},
                      {"parse", row.parse},
                      {"pattern", row.pattern},
                      {"actual", row.actual},
                      {"predicted", row.predicted}});
  }
  const nlohmann::json json = {{"total", report.total},
                               {"correct", report.correct},
                               {"accuracy", report.accuracy},
                               {"errors", std::move(errors)}};
  return json.dump(2) + "\n";
}

std::string comparison_csv(const ComparisonTable& table) {
  std::string csv = "index,word,actual";
  for (const std::string& model : table.models) {
    csv += ',' + model + "_tags," + model + "_correct";
  }
  csv += '\n';
  for (const ComparisonRow& row : table.rows) {
    csv += std::to_string(row.index);
    csv += ',' + row.word + ',' + row.actual;
    for (const ComparisonCell& cell : row.cells) {
      csv += ',' + cell.tags + ',';
      csv += cell.correct ? "true" : "false";
    }
    csv += '\n';
  }
  return csv;
}

}  // namespace tenyisyl
