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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "tenyisyl/eval.hpp"
#include "tenyisyl/tagging.hpp"

using namespace tenyisyl;

namespace {

// A scored set of `total` copies of "ke" with exactly `correct` of the
// predictions right.
EvalReport synthetic_report(std::size_t correct, std::size_t total) {
  const SyllabifiedWord word = make_word({U"ke"});
  std::vector<SyllabifiedWord> golds(total, word);
  std::vector<TagSequence> predictions(total, "SC");
  for (std::size_t i = correct; i < total; ++i) predictions[i] = "SS";
  return word_accuracy(predictions, golds);
}

}  // namespace

TEST_CASE("reference accuracy figures reproduce from their counts") {
  CHECK(accuracy_percent(982, 1012) == doctest::Approx(97.04).epsilon(1e-12));
  CHECK(accuracy_percent(1004, 1012) == doctest::Approx(99.21).epsilon(1e-12));
  CHECK(accuracy_percent(1002, 1012) == doctest::Approx(99.01).epsilon(1e-12));
  CHECK(accuracy_percent(954, 1012) == doctest::Approx(94.27).epsilon(1e-12));

  const EvalReport lstm = synthetic_report(982, 1012);
  CHECK(lstm.total == 1012);
  CHECK(lstm.correct == 982);
  CHECK(lstm.accuracy == doctest::Approx(97.04).epsilon(1e-12));
}

TEST_CASE("accuracy edge cases") {
  CHECK(accuracy_percent(0, 5) == 0.0);
  CHECK(accuracy_percent(5, 5) == 100.0);
  CHECK(accuracy_percent(0, 0) == 0.0);
  CHECK(accuracy_percent(1, 3) == doctest::Approx(33.33).epsilon(1e-12));
  CHECK(accuracy_percent(2, 3) == doctest::Approx(66.67).epsilon(1e-12));
  // Half-up at an exact .005 boundary: 1/8 = 12.5% stays representable,
  // 1/16 = 6.25% likewise; 7/8 = 87.5%.
  CHECK(accuracy_percent(1, 8) == doctest::Approx(12.5).epsilon(1e-12));
  CHECK_THROWS_AS(accuracy_percent(2, 1), std::invalid_argument);
}

TEST_CASE("word_accuracy counts exact tag matches only") {
  const std::vector<SyllabifiedWord> golds = {
      make_word({U"te", U"nyi", U"die"}),
      make_word({U"ke"}),
      make_word({U"chü", U"ü", U"mo", U"-u"}),
  };
  std::vector<TagSequence> predictions;
  for (const auto& w : golds) predictions.push_back(encode_tags(w));
  EvalReport all = word_accuracy(predictions, golds);
  CHECK(all.total == 3);
  CHECK(all.correct == 3);
  CHECK(all.accuracy == 100.0);
  CHECK(all.errors.empty());

  predictions[1] = "SS";
  EvalReport one_wrong = word_accuracy(predictions, golds);
  CHECK(one_wrong.correct == 2);
  CHECK(one_wrong.errors.size() == one_wrong.total - one_wrong.correct);
  CHECK(one_wrong.errors[0].index == 1);
  CHECK(one_wrong.errors[0].word == "ke");
}

TEST_CASE("length mismatch between the lists throws") {
  const std::vector<SyllabifiedWord> golds = {make_word({U"ke"})};
  const std::vector<TagSequence> predictions = {"SC", "SC"};
  CHECK_THROWS_AS(word_accuracy(predictions, golds), std::invalid_argument);
}

TEST_CASE("error row carries parse, CV pattern, and both tag strings") {
  const std::vector<SyllabifiedWord> golds = {make_word({U"she", U"so", U"u"})};
  const std::vector<TagSequence> predictions = {"SCCSCC"};
  const std::vector<ErrorRow> rows = error_rows(predictions, golds);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].index == 0);
  CHECK(rows[0].word == "shesou");
  CHECK(rows[0].parse == "she+so+u");
  CHECK(rows[0].pattern == "CCV CV V");
  CHECK(rows[0].actual == "SCCSCS");
  CHECK(rows[0].predicted == "SCCSCC");
}

TEST_CASE("no errors yields an empty row list") {
  const std::vector<SyllabifiedWord> golds = {make_word({U"ke"})};
  CHECK(error_rows({"SC"}, golds).empty());
}

TEST_CASE("wrong-length outputs are errors and keep the raw string") {
  const std::vector<SyllabifiedWord> golds = {make_word({U"ke"}),
                                              make_word({U"mo"})};
  const std::vector<TagSequence> predictions = {"SCC", ""};
  const EvalReport report = word_accuracy(predictions, golds);
  CHECK(report.correct == 0);
  REQUIRE(report.errors.size() == 2);
  CHECK(report.errors[0].predicted == "SCC");
  CHECK(report.errors[1].predicted == "");
}

TEST_CASE("compare_models flags each model against gold") {
  const std::vector<SyllabifiedWord> golds = {
      make_word({U"she", U"so", U"u"}),
      make_word({U"ke"}),
      make_word({U"te", U"nyi", U"die"}),
  };
  std::vector<TagSequence> gold_tags;
  for (const auto& w : golds) gold_tags.push_back(encode_tags(w));

  std::vector<TagSequence> a = gold_tags;
  a[0] = "SCCSCC";  // wrong on shesou only
  std::vector<TagSequence> b = gold_tags;
  b[1] = "SS";  // wrong on ke only

  const ComparisonTable table = compare_models({
      {"blstm", word_accuracy(a, golds)},
      {"lstm", word_accuracy(b, golds)},
  });
  CHECK(table.models == std::vector<std::string>{"blstm", "lstm"});
  REQUIRE(table.rows.size() == 2);  // tenyidie correct everywhere: absent

  const ComparisonRow& shesou = table.rows[0];
  CHECK(shesou.index == 0);
  CHECK(shesou.word == "shesou");
  CHECK(shesou.actual == "SCCSCS");
  CHECK(shesou.cells[0].tags == "SCCSCC");
  CHECK_FALSE(shesou.cells[0].correct);
  CHECK(shesou.cells[1].tags == "SCCSCS");
  CHECK(shesou.cells[1].correct);

  const ComparisonRow& ke = table.rows[1];
  CHECK(ke.index == 1);
  CHECK(ke.cells[0].correct);
  CHECK_FALSE(ke.cells[1].correct);

  // The flag is recomputable: it holds exactly when the cell equals gold.
  for (const ComparisonRow& row : table.rows) {
    for (const ComparisonCell& cell : row.cells) {
      CHECK(cell.correct == (cell.tags == row.actual));
    }
  }
}

TEST_CASE("an empty emitted string is not mistaken for a correct cell") {
  const std::vector<SyllabifiedWord> golds = {make_word({U"ke"})};
  const ComparisonTable table = compare_models({
      {"seq2seq", word_accuracy({""}, golds)},
      {"blstm", word_accuracy({"SC"}, golds)},
  });
  REQUIRE(table.rows.size() == 1);
  CHECK(table.rows[0].cells[0].tags == "");
  CHECK_FALSE(table.rows[0].cells[0].correct);
  CHECK(table.rows[0].cells[1].tags == "SC");
  CHECK(table.rows[0].cells[1].correct);
}

TEST_CASE("compare_models rejects bad input") {
  const std::vector<SyllabifiedWord> golds = {make_word({U"ke"})};
  const EvalReport one = word_accuracy({"SC"}, golds);
  CHECK_THROWS_AS(compare_models({{"only", one}}), std::invalid_argument);

  const EvalReport bigger =
      word_accuracy({"SC", "SC"}, {make_word({U"ke"}), make_word({U"mo"})});
  CHECK_THROWS_AS(compare_models({{"a", one}, {"b", bigger}}),
                  std::invalid_argument);

  // Same totals but different words at the shared error index.
  const EvalReport err_ke = word_accuracy({"SS"}, {make_word({U"ke"})});
  const EvalReport err_mo = word_accuracy({"SS"}, {make_word({U"mo"})});
  CHECK_THROWS_AS(compare_models({{"a", err_ke}, {"b", err_mo}}),
                  std::invalid_argument);
}

TEST_CASE("CSV surfaces") {
  const std::vector<SyllabifiedWord> golds = {make_word({U"she", U"so", U"u"})};
  const EvalReport report = word_accuracy({"SCCSCC"}, golds);
  CHECK(report_csv(report) ==
        "index,word,parse,pattern,actual,predicted\n"
        "0,shesou,she+so+u,CCV CV V,SCCSCS,SCCSCC\n");

  const ComparisonTable table = compare_models({
      {"blstm", report},
      {"lstm", word_accuracy({"SCCSCS"}, golds)},
  });
  CHECK(comparison_csv(table) ==
        "index,word,actual,blstm_tags,blstm_correct,lstm_tags,lstm_correct\n"
        "0,shesou,SCCSCS,SCCSCC,false,SCCSCS,true\n");
}

TEST_CASE("JSON report round-trips through a parser") {
  const std::vector<SyllabifiedWord> golds = {make_word({U"she", U"so", U"u"}),
                                              make_word({U"ke"})};
  const EvalReport report = word_accuracy({"SCCSCC", "SC"}, golds);
  const nlohmann::json json = nlohmann::json::parse(report_json(report));
  CHECK(json["total"] == 2);
  CHECK(json["correct"] == 1);
  CHECK(json["accuracy"] == doctest::Approx(50.0));
  REQUIRE(json["errors"].size() == 1);
  CHECK(json["errors"][0]["word"] == "shesou");
  CHECK(json["errors"][0]["parse"] == "she+so+u");
  CHECK(json["errors"][0]["pattern"] == "CCV CV V");
  CHECK(json["errors"][0]["actual"] == "SCCSCS");
  CHECK(json["errors"][0]["predicted"] == "SCCSCC");
}
