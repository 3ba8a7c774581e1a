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

#include "tenyisyl/tagging.hpp"

#include "doctest.h"
#include "tenyisyl/synth.hpp"

using namespace tenyisyl;

TEST_CASE("encode_tags labels syllable starts") {
  CHECK(encode_tags(make_word({U"te", U"nyi", U"die"})) == "SCSCCSCC");
  CHECK(encode_tags(make_word({U"chü", U"ü", U"mo", U"-u"})) == "SCCSSCS");
  CHECK(encode_tags(make_word({U"ba"})) == "SC");
  CHECK(encode_tags(make_word({U"a"})) == "S");
  CHECK(encode_tags(make_word({U"she", U"so", U"u"})) == "SCCSCS");
  CHECK(encode_tags(make_word({U"tsei", U"ü"})) == "SCCCS");
}

TEST_CASE("tag count equals syllable count") {
  const auto w = make_word({U"ki", U"lon", U"ser", U"-ko"});
  const auto tags = encode_tags(w);
  CHECK(tags.size() == taggable_length(w.surface));
  std::size_t starts = 0;
  for (char t : tags) starts += (t == kTagStart);
  CHECK(starts == w.syllable_count());
}

TEST_CASE("decode_tags rebuilds the decomposition") {
  const auto w1 = decode_tags(U"tenyidie", "SCSCCSCC");
  CHECK(w1.syllables() ==
        std::vector<std::u32string>{U"te", U"nyi", U"die"});

  const auto w2 = decode_tags(U"chüümo-u", "SCCSSCS");
  CHECK(w2.syllables() ==
        std::vector<std::u32string>{U"chü", U"ü", U"mo", U"-u"});

  const auto w3 = decode_tags(U"a", "S");
  CHECK(w3.syllables() == std::vector<std::u32string>{U"a"});

  // A hyphen inside a continued syllable stays glued to that syllable.
  const auto w4 = decode_tags(U"ab-cd", "SCCC");
  CHECK(w4.syllables() == std::vector<std::u32string>{U"ab-cd"});
}

TEST_CASE("decode_tags validates its input") {
  CHECK_THROWS_AS(decode_tags(U"ba", "S"), std::invalid_argument);
  CHECK_THROWS_AS(decode_tags(U"ba", "SCC"), std::invalid_argument);
  CHECK_THROWS_AS(decode_tags(U"ba", "CC"), std::invalid_argument);
  CHECK_THROWS_AS(decode_tags(U"ba", "SX"), std::invalid_argument);
  CHECK_THROWS_AS(decode_tags(U"ba-", "SC"), std::invalid_argument);
}

TEST_CASE("decode inverts encode across a synthetic corpus") {
  const auto words = synthesize_corpus(default_synthesis_config(2000, 21));
  for (const auto& w : words) {
    const auto tags = encode_tags(w);
    const auto back = decode_tags(w.surface, tags);
    REQUIRE(back.surface == w.surface);
    REQUIRE(back.boundaries == w.boundaries);
  }
}
