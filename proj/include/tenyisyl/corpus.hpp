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
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace tenyisyl {

/// A word together with its gold syllable decomposition. `surface` is the
/// written form (hyphens included, no spaces); `boundaries` holds the start
/// index of every syllable in ascending order, always beginning with 0.
struct SyllabifiedWord {
  std::u32string surface;
  std::vector<std::size_t> boundaries;

  std::size_t syllable_count() const { return boundaries.size(); }
  std::u32string syllable(std::size_t i) const;
  std::vector<std::u32string> syllables() const;
  std::size_t length() const { return surface.size(); }
};

/// Builds a word from its syllables, enforcing the corpus invariants
/// (non-empty syllables, no syllable ends in a hyphen).
SyllabifiedWord make_word(const std::vector<std::u32string>& syllables);

/// Validation failure while reading corpus text. `line` is 1-based; 0 means
/// the error is not tied to a specific line.
struct CorpusError : std::runtime_error {
  CorpusError(std::size_t line_no, const std::string& message);
  std::size_t line;
};

/// Parses corpus text: one word per line, syllables separated by single
/// spaces. Input is canonicalized (lowercased, ü composed) on ingestion.
/// Rejects characters outside the alphabet plus hyphen, empty syllables
/// (double spaces), and syllables ending in a hyphen, reporting the line
/// number. Empty lines are skipped; input order is preserved.
std::vector<SyllabifiedWord> parse_corpus(std::string_view text);

/// Inverse of parse_corpus: syllables joined with single spaces, one word
/// per line, UTF-8. parse_corpus(format_corpus(ws)) == ws for valid input.
std::string format_corpus(const std::vector<SyllabifiedWord>& words);
std::string format_word(const SyllabifiedWord& word);

struct CorpusStats {
  std::size_t word_count = 0;
  std::size_t min_len = 0;
  std::size_t max_len = 0;
  double mean_len = 0.0;
};

/// Min/max/mean over surface lengths; hyphens count as characters.
/// Throws std::invalid_argument on an empty list.
CorpusStats corpus_stats(const std::vector<SyllabifiedWord>& words);

struct SplitSpec {
  double train_frac = 0.8;
  double valid_frac = 0.1;
  double test_frac = 0.1;
  std::uint64_t seed = 0;
};

struct CorpusSplit {
  std::vector<SyllabifiedWord> train;
  std::vector<SyllabifiedWord> valid;
  std::vector<SyllabifiedWord> test;
};

/// Seeded shuffle followed by a contiguous partition. Validation and test
/// get floor(frac * N) words each; the remainder goes to train.
CorpusSplit split(std::vector<SyllabifiedWord> words, const SplitSpec& spec);

}  // namespace tenyisyl
