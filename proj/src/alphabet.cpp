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

#include "tenyisyl/alphabet.hpp"

namespace tenyisyl::alphabet {

namespace {
constexpr std::u32string_view kVowels = U"aeiouü";
constexpr std::u32string_view kConsonants = U"bcdfghjklmnprstvwyz";
// Latin order with ü appended after z.
constexpr std::u32string_view kOrdered = U"abcdefghijklmnoprstuvwyzü";
}  // namespace

std::u32string_view vowels() { return kVowels; }
std::u32string_view consonants() { return kConsonants; }
std::u32string_view letters_in_order() { return kOrdered; }

bool is_vowel(char32_t c) { return kVowels.find(c) != std::u32string_view::npos; }

bool is_consonant(char32_t c) {
  return kConsonants.find(c) != std::u32string_view::npos;
}

bool is_letter(char32_t c) { return is_vowel(c) || is_consonant(c); }

}  // namespace tenyisyl::alphabet
