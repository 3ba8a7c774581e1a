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

#include "tenyisyl/corpus.hpp"

#include <algorithm>
#include <cmath>

#include "tenyisyl/alphabet.hpp"
#include "tenyisyl/rng.hpp"
#include "tenyisyl/text.hpp"

namespace tenyisyl {

std::u32string SyllabifiedWord::syllable(std::size_t i) const {
  const std::size_t begin = boundaries[i];
  const std::size_t end =
      i + 1 < boundaries.size() ? boundaries[i + 1] : surface.size();
  return surface.substr(begin, end - begin);
}

std::vector<std::u32string> SyllabifiedWord::syllables() const {
  std::vector<std::u32string> out;
  out.reserve(boundaries.size());
  for (std::size_t i = 0; i < boundaries.size(); ++i) out.push_back(syllable(i));
  return out;
}

SyllabifiedWord make_word(const std::vector<std::u32string>& syllables) {
  SyllabifiedWord w;
  for (const auto& syl : syllables) {
    if (syl.empty()) throw CorpusError(0, "empty syllable");
    if (syl.back() == alphabet::kHyphen) {
      throw CorpusError(0, "syllable ends in hyphen: '" + utf8_encode(syl) + "'");
    }
    w.boundaries.push_back(w.surface.size());
    w.surface += syl;
  }
  if (w.boundaries.empty()) throw CorpusError(0, "word has no syllables");
  return w;
}

CorpusError::CorpusError(std::size_t line_no, const std::string& message)
    : std::runtime_error(line_no == 0 ? message
                                      : "line " + std::to_string(line_no) +
                                            ": " + message),
      line(line_no) {}

namespace {

SyllabifiedWord parse_line(std::u32string_view line, std::size_t line_no) {
  SyllabifiedWord w;
  std::size_t syl_len = 0;
  auto open_syllable = [&] {
    w.boundaries.push_back(w.surface.size());
    syl_len = 0;
  };
  auto close_syllable = [&] {
    if (syl_len == 0) throw CorpusError(line_no, "empty syllable (double space)");
    if (w.surface.back() == alphabet::kHyphen) {
      throw CorpusError(line_no, "syllable ends in hyphen");
    }
  };

  open_syllable();
  for (char32_t c : line) {
    if (c == U' ') {
      close_syllable();
      open_syllable();
      continue;
    }
    if (!alphabet::is_letter(c) && !alphabet::is_hyphen(c)) {
      throw CorpusError(line_no, "character '" + utf8_encode(c) +
                                     "' is outside the alphabet");
    }
    w.surface.push_back(c);
    ++syl_len;
  }
  close_syllable();
  return w;
}

}  // namespace

std::vector<SyllabifiedWord> parse_corpus(std::string_view text) {
  // Strip a UTF-8 BOM if present.
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") {
    text.remove_prefix(3);
  }
  std::vector<SyllabifiedWord> words;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view raw = text.substr(pos, eol - pos);
    ++line_no;
    pos = eol + 1;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    if (raw.empty()) {
      if (pos > text.size()) break;
      continue;
    }
    const std::u32string line = canonicalize(utf8_decode(raw));
    words.push_back(parse_line(line, line_no));
    if (pos > text.size()) break;
  }
  return words;
}

std::string format_word(const SyllabifiedWord& word) {
  std::u32string joined;
  for (std::size_t i = 0; i < word.syllable_count(); ++i) {
    if (i > 0) joined.push_back(U' ');
    joined += word.syllable(i);
  }
  return utf8_encode(joined);
}

std::string format_corpus(const std::vector<SyllabifiedWord>& words) {
  std::string out;
  for (const auto& w : words) {
    out += format_word(w);
    out.push_back('\n');
  }
  return out;
}

CorpusStats corpus_stats(const std::vector<SyllabifiedWord>& words) {
  if (words.empty()) {
    throw std::invalid_argument("corpus_stats: empty word list");
  }
  CorpusStats s;
  s.word_count = words.size();
  s.min_len = words.front().length();
  s.max_len = words.front().length();
  double total = 0.0;
  for (const auto& w : words) {
    s.min_len = std::min(s.min_len, w.length());
    s.max_len = std::max(s.max_len, w.length());
    total += static_cast<double>(w.length());
  }
  s.mean_len = total / static_cast<double>(words.size());
  return s;
}

CorpusSplit split(std::vector<SyllabifiedWord> words, const SplitSpec& spec) {
  if (words.empty()) throw std::invalid_argument("split: empty word list");
  if (spec.train_frac <= 0.0 || spec.valid_frac <= 0.0 || spec.test_frac <= 0.0) {
    throw std::invalid_argument("split: fractions must be positive");
  }
  if (std::abs(spec.train_frac + spec.valid_frac + spec.test_frac - 1.0) > 1e-9) {
    throw std::invalid_argument("split: fractions must sum to 1");
  }

  Rng rng(spec.seed);
  rng.shuffle(words);

  const std::size_t n = words.size();
  const auto valid_n = static_cast<std::size_t>(
      std::floor(spec.valid_frac * static_cast<double>(n)));
  const auto test_n = static_cast<std::size_t>(
      std::floor(spec.test_frac * static_cast<double>(n)));
  const std::size_t train_n = n - valid_n - test_n;

  CorpusSplit out;
  out.train.assign(words.begin(), words.begin() + train_n);
  out.valid.assign(words.begin() + train_n, words.begin() + train_n + valid_n);
  out.test.assign(words.begin() + train_n + valid_n, words.end());
  return out;
}

}  // namespace tenyisyl
