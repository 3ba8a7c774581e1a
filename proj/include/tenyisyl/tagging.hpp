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

#include <string>
#include <string_view>

#include "tenyisyl/corpus.hpp"

namespace tenyisyl {

/// Per-letter tag string over {'S', 'C'}: S marks a syllable-starting letter,
/// C a continuation. Hyphens carry no tag, so the string length equals the
/// word's non-hyphen letter count and a non-empty sequence begins with S.
using TagSequence = std::string;

inline constexpr char kTagStart = 'S';
inline constexpr char kTagCont = 'C';

/// Number of taggable (non-hyphen) characters.
std::size_t taggable_length(std::u32string_view surface);

/// Labels each non-hyphen letter: S on the first non-hyphen letter of its
/// syllable, C elsewhere. Throws std::invalid_argument if some syllable has
/// no taggable letter.
TagSequence encode_tags(const SyllabifiedWord& word);

/// Rebuilds the syllable decomposition from a tag string: a boundary opens
/// at every S, and a hyphen joins the syllable of the letter that follows
/// it. Inverse of encode_tags. Throws std::invalid_argument when the tag
/// count does not match the taggable length, the first tag is not S, a tag
/// is outside {S, C}, or the surface ends in a hyphen.
SyllabifiedWord decode_tags(std::u32string_view surface,
                            const TagSequence& tags);

}  // namespace tenyisyl
