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

#include "tenyisyl/baseline.hpp"

#include "doctest.h"
#include "tenyisyl/corpus.hpp"
#include "tenyisyl/synth.hpp"

using namespace tenyisyl;

namespace {

// Enumerates every complete segmentation of surface over the inventory.
void enumerate(std::u32string_view surface, std::size_t pos,
               const SyllableInventory& inv, std::vector<std::u32string>& cur,
               std::vector<std::vector<std::u32string>>& out) {
  if (pos == surface.size()) {
    out.push_back(cur);
    return;
  }
  for (std::size_t len = 1; len <= surface.size() - pos; ++len) {
    std::u32string cand(surface.substr(pos, len));
    if (!inv.contains(cand)) continue;
    cur.push_back(cand);
    enumerate(surface, pos + len, inv, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<std::u32string>> all_parses(
    std::u32string_view surface, const SyllableInventory& inv) {
  std::vector<std::u32string> cur;
  std::vector<std::vector<std::u32string>> out;
  enumerate(surface, 0, inv, cur, out);
  return out;
}

}  // namespace

TEST_CASE("build_inventory collects gold syllables") {
  const auto inv = build_inventory(parse_corpus("te nyi die\nke -u\n"));
  CHECK(inv.syllables ==
        std::set<std::u32string>{U"te", U"nyi", U"die", U"ke", U"-u"});
  CHECK(inv.max_len == 3);
  CHECK_THROWS_AS(build_inventory({}), std::invalid_argument);
}

TEST_CASE("segment backtracks off greedy dead ends") {
  SyllableInventory inv;
  inv.syllables = {U"te", U"nyi", U"die", U"ten"};
  inv.max_len = 3;
  const auto got = segment(U"tenyidie", inv);
  REQUIRE(got.has_value());
  // Hand-traced: "ten" matches first but strands "yidie"; the search backs
  // up to "te" and completes. The enumeration oracle confirms uniqueness.
  CHECK(got->syllables() ==
        std::vector<std::u32string>{U"te", U"nyi", U"die"});
  const auto parses = all_parses(U"tenyidie", inv);
  REQUIRE(parses.size() == 1);
  CHECK(parses[0] == got->syllables());
}

TEST_CASE("segment handles trivial and failing inputs") {
  SyllableInventory ba;
  ba.syllables = {U"ba"};
  ba.max_len = 2;
  const auto got = segment(U"ba", ba);
  REQUIRE(got.has_value());
  CHECK(got->syllables() == std::vector<std::u32string>{U"ba"});

  CHECK(!segment(U"xyz", ba).has_value());
  CHECK(!segment(U"baba ", ba).has_value());
  CHECK_THROWS_AS(segment(U"", ba), std::invalid_argument);
}

TEST_CASE("segment prefers the longest match when ambiguous") {
  SyllableInventory inv;
  inv.syllables = {U"a", U"ab", U"b"};
  inv.max_len = 2;
  const auto got = segment(U"ab", inv);
  REQUIRE(got.has_value());
  CHECK(got->syllables() == std::vector<std::u32string>{U"ab"});
  CHECK(all_parses(U"ab", inv).size() == 2);
}

TEST_CASE("segment recovers gold parses on synthetic words") {
  const auto words = synthesize_corpus(default_synthesis_config(400, 23));
  const auto inv = build_inventory(words);

  // Inventory containment: every inventory entry came from the generator's
  // tables.
  const auto cfg = default_synthesis_config(1, 0);
  std::set<std::u32string> allowed;
  for (const auto& [syl, freq] : cfg.syllable_table) allowed.insert(syl);
  for (const auto& [mk, freq] : cfg.marker_table) allowed.insert(mk);
  for (const auto& syl : inv.syllables) CHECK(allowed.count(syl) == 1);

  std::size_t checked = 0;
  for (const auto& w : words) {
    const auto got = segment(w.surface, inv);
    REQUIRE(got.has_value());
    CHECK(got->surface == w.surface);
    for (const auto& syl : got->syllables()) CHECK(inv.contains(syl));

    // Where the parse is unique, longest-match must return gold.
    if (w.length() <= 12) {
      const auto parses = all_parses(w.surface, inv);
      REQUIRE(!parses.empty());
      if (parses.size() == 1) {
        CHECK(got->syllables() == w.syllables());
        ++checked;
      }
    }
  }
  CHECK(checked > 100);
}
