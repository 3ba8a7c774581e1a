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

namespace tenyisyl {

/// The Tenyidie alphabet: 25 letters (6 vowels, 19 consonants) plus the
/// hyphen that introduces bound markers such as "-u" and "-ko". The hyphen
/// is part of the written word but is neither vowel nor consonant.
namespace alphabet {

inline constexpr char32_t kHyphen = U'-';
inline constexpr char32_t kUDiaeresis = U'ü';

/// "aeiouü"
std::u32string_view vowels();

/// "bcdfghjklmnprstvwyz" (no q, no x)
std::u32string_view consonants();

bool is_vowel(char32_t c);
bool is_consonant(char32_t c);
bool is_letter(char32_t c);
inline bool is_hyphen(char32_t c) { return c == kHyphen; }

/// Letters in canonical order followed by the hyphen; the order the rest of
/// the toolkit (vocabularies, tie-breaks) relies on.
std::u32string_view letters_in_order();

}  // namespace alphabet

}  // namespace tenyisyl
