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
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tenyisyl/corpus.hpp"

namespace tenyisyl {

/// One template per syllable, each a string over {'C', 'V'}; hyphens
/// contribute nothing, so a template's length is the syllable's non-hyphen
/// letter count.
std::vector<std::string> cv_pattern(const SyllabifiedWord& word);

/// Space-joined rendering, e.g. "CCV V CV V".
std::string cv_pattern_string(const SyllabifiedWord& word);

/// Counts CV templates over all syllable occurrences in the corpus.
std::map<std::string, std::size_t> syllable_type_histogram(
    const std::vector<SyllabifiedWord>& corpus);

/// CV-template counts broken down by position within the word. The first
/// syllable counts as beginning, the last of a multi-syllable word as end,
/// anything in between as middle; monosyllables count toward beginning only.
struct PositionalStats {
  std::map<std::string, std::size_t> beginning;
  std::map<std::string, std::size_t> middle;
  std::map<std::string, std::size_t> end;
};

PositionalStats positional_histogram(const std::vector<SyllabifiedWord>& corpus);

/// The n most frequent syllables, descending frequency with lexicographic
/// tie-break. Syllable identity includes any leading hyphen, so the marker
/// "-u" ranks separately from the vowel "u". Returns fewer than n entries
/// when the corpus has fewer distinct syllables.
std::vector<std::pair<std::u32string, std::size_t>> top_syllables(
    const std::vector<SyllabifiedWord>& corpus, std::size_t n);

/// Checks the consonant run opening a syllable (ignoring a leading hyphen).
/// Runs of length 0 or 1 are always fine. Longer runs must be a plosive plus
/// trill cluster {pr, phr, kr, khr}, an affricate {ts, dz, pf} optionally
/// followed by h, or a consonant+h digraph.
bool validate_onset_cluster(std::u32string_view syllable);

}  // namespace tenyisyl
