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

#include "tenyisyl/phonotactics.hpp"

#include <algorithm>

#include "tenyisyl/alphabet.hpp"

namespace tenyisyl {

namespace {

std::string syllable_template(const std::u32string& syllable) {
  std::string tpl;
  tpl.reserve(syllable.size());
  for (char32_t c : syllable) {
    if (alphabet::is_hyphen(c)) continue;
    tpl.push_back(alphabet::is_vowel(c) ? 'V' : 'C');
  }
  return tpl;
}

}  // namespace

std::vector<std::string> cv_pattern(const SyllabifiedWord& word) {
  std::vector<std::string> templates;
  templates.reserve(word.syllable_count());
  for (std::size_t i = 0; i < word.syllable_count(); ++i) {
    templates.push_back(syllable_template(word.syllable(i)));
  }
  return templates;
}

std::string cv_pattern_string(const SyllabifiedWord& word) {
  std::string out;
  for (const auto& tpl : cv_pattern(word)) {
    if (!out.empty()) out.push_back(' ');
    out += tpl;
  }
  return out;
}

std::map<std::string, std::size_t> syllable_type_histogram(
    const std::vector<SyllabifiedWord>& corpus) {
  std::map<std::string, std::size_t> hist;
  for (const auto& word : corpus) {
    for (const auto& tpl : cv_pattern(word)) ++hist[tpl];
  }
  return hist;
}

PositionalStats positional_histogram(
    const std::vector<SyllabifiedWord>& corpus) {
  PositionalStats stats;
  for (const auto& word : corpus) {
    const auto templates = cv_pattern(word);
    const std::size_t n = templates.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (i == 0) {
        ++stats.beginning[templates[i]];
      } else if (i == n - 1) {
        ++stats.end[templates[i]];
      } else {
        ++stats.middle[templates[i]];
      }
    }
  }
  return stats;
}

std::vector<std::pair<std::u32string, std::size_t>> top_syllables(
    const std::vector<SyllabifiedWord>& corpus, std::size_t n) {
  std::map<std::u32string, std::size_t> counts;
  for (const auto& word : corpus) {
    for (std::size_t i = 0; i < word.syllable_count(); ++i) {
      ++counts[word.syllable(i)];
    }
  }
  std::vector<std::pair<std::u32string, std::size_t>> ranked(counts.begin(),
                                                             counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (ranked.size() > n) ranked.resize(n);
  return ranked;
}

bool validate_onset_cluster(std::u32string_view syllable) {
  std::u32string onset;
  for (char32_t c : syllable) {
    if (alphabet::is_hyphen(c)) continue;
    if (!alphabet::is_consonant(c)) break;
    onset.push_back(c);
  }
  if (onset.size() <= 1) return true;
  if (onset == U"pr" || onset == U"phr" || onset == U"kr" || onset == U"khr") {
    return true;
  }
  const bool affricate_head = onset.compare(0, 2, U"ts") == 0 ||
                              onset.compare(0, 2, U"dz") == 0 ||
                              onset.compare(0, 2, U"pf") == 0;
  if (affricate_head) {
    return onset.size() == 2 || (onset.size() == 3 && onset[2] == U'h');
  }
  return onset.size() == 2 && onset[1] == U'h';
}

}  // namespace tenyisyl
