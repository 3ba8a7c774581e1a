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

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tenyisyl/corpus.hpp"

namespace tenyisyl {

/// Configuration for the synthetic corpus generator. Words are built from
/// `syllable_table` draws (proportional to frequency); with probability
/// `marker_prob` a hyphen-initial marker from `marker_table` is appended
/// word-finally. The syllable count per word is geometric with its mean
/// chosen so the expected surface length matches `target_mean_len`, then
/// clamped to [min_syllables, max_syllables] (max 0 = unbounded; setting
/// min == max fixes the count).
struct SynthesisConfig {
  std::vector<std::pair<std::u32string, double>> syllable_table;
  std::vector<std::pair<std::u32string, double>> marker_table;
  double target_mean_len = 8.58;
  std::size_t word_count = 0;
  std::uint64_t seed = 0;
  double marker_prob = 0.15;
  std::size_t min_syllables = 1;
  std::size_t max_syllables = 0;
};

/// The 50 most frequent Tenyidie syllables with their news-text counts
/// (49 plain syllables plus the definite marker "-u"), preloaded into a
/// config targeting the observed mean word length of 8.58 letters.
SynthesisConfig default_synthesis_config(std::size_t word_count,
                                         std::uint64_t seed);

/// Deterministic synthetic corpus; output always passes parse_corpus
/// validation. Throws std::invalid_argument on an invalid config.
std::vector<SyllabifiedWord> synthesize_corpus(const SynthesisConfig& cfg);

}  // namespace tenyisyl
