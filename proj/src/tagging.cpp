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

#include "tenyisyl/alphabet.hpp"

namespace tenyisyl {

std::size_t taggable_length(std::u32string_view surface) {
  std::size_t n = 0;
  for (char32_t c : surface) {
    if (!alphabet::is_hyphen(c)) ++n;
  }
  return n;
}

TagSequence encode_tags(const SyllabifiedWord& word) {
  TagSequence tags;
  tags.reserve(word.length());
  for (std::size_t s = 0; s < word.syllable_count(); ++s) {
    bool first = true;
    for (char32_t c : word.syllable(s)) {
      if (alphabet::is_hyphen(c)) continue;
      tags.push_back(first ? kTagStart : kTagCont);
      first = false;
    }
    if (first) {
      throw std::invalid_argument("encode_tags: syllable without a taggable letter");
    }
  }
  return tags;
}

SyllabifiedWord decode_tags(std::u32string_view surface,
                            const TagSequence& tags) {
  if (tags.size() != taggable_length(surface)) {
    throw std::invalid_argument("decode_tags: tag count " +
                                std::to_string(tags.size()) +
                                " does not match taggable length " +
                                std::to_string(taggable_length(surface)));
  }
  if (!tags.empty() && tags.front() != kTagStart) {
    throw std::invalid_argument("decode_tags: first tag must be S");
  }
  for (char t : tags) {
    if (t != kTagStart && t != kTagCont) {
      throw std::invalid_argument(std::string("decode_tags: invalid tag '") +
                                  t + "'");
    }
  }

  std::vector<std::u32string> syllables;
  std::u32string current, pending;
  std::size_t next_tag = 0;
  for (char32_t c : surface) {
    if (alphabet::is_hyphen(c)) {
      pending.push_back(c);
      continue;
    }
    if (tags[next_tag] == kTagStart) {
      if (!current.empty()) syllables.push_back(std::move(current));
      current = pending;
    } else {
      current += pending;
    }
    pending.clear();
    current.push_back(c);
    ++next_tag;
  }
  if (!pending.empty()) {
    throw std::invalid_argument("decode_tags: surface ends in a hyphen");
  }
  if (!current.empty()) syllables.push_back(std::move(current));
  return make_word(syllables);
}

}  // namespace tenyisyl
