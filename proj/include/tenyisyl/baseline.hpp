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

#include <optional>
#include <set>
#include <string>

#include "tenyisyl/corpus.hpp"

namespace tenyisyl {

/// Syllable lexicon for the dictionary-driven segmenter. Entries keep their
/// leading hyphen, so markers match only at hyphen positions.
struct SyllableInventory {
  std::set<std::u32string> syllables;
  std::size_t max_len = 0;

  bool contains(const std::u32string& s) const {
    return syllables.count(s) != 0;
  }
};

/// Collects every gold syllable observed in the training words.
SyllableInventory build_inventory(const std::vector<SyllabifiedWord>& train);

/// Longest-match segmentation with backtracking: depth-first search trying
/// the longest inventory entry first at each position, returning the first
/// complete cover. Deterministic; nullopt when no segmentation covers the
/// surface.
std::optional<SyllabifiedWord> segment(std::u32string_view surface,
                                       const SyllableInventory& inventory);

}  // namespace tenyisyl
