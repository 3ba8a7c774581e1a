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

#include "tenyisyl/baseline.hpp"

#include <algorithm>

namespace tenyisyl {

namespace {

bool cover(std::u32string_view surface, std::size_t pos,
           const SyllableInventory& inv,
           std::vector<std::u32string>& pieces) {
  if (pos == surface.size()) return true;
  const std::size_t longest = std::min(inv.max_len, surface.size() - pos);
  for (std::size_t len = longest; len >= 1; --len) {
    std::u32string candidate(surface.substr(pos, len));
    if (!inv.contains(candidate)) continue;
    pieces.push_back(std::move(candidate));
    if (cover(surface, pos + len, inv, pieces)) return true;
    pieces.pop_back();
  }
  return false;
}

}  // namespace

SyllableInventory build_inventory(const std::vector<SyllabifiedWord>& train) {
  if (train.empty()) {
    throw std::invalid_argument("build_inventory: empty training set");
  }
  SyllableInventory inv;
  for (const auto& word : train) {
    for (std::size_t i = 0; i < word.syllable_count(); ++i) {
      std::u32string syl = word.syllable(i);
      inv.max_len = std::max(inv.max_len, syl.size());
      inv.syllables.insert(std::move(syl));
    }
  }
  return inv;
}

std::optional<SyllabifiedWord> segment(std::u32string_view surface,
                                       const SyllableInventory& inventory) {
  if (surface.empty()) {
    throw std::invalid_argument("segment: empty surface");
  }
  std::vector<std::u32string> pieces;
  if (!cover(surface, 0, inventory, pieces)) return std::nullopt;
  return make_word(pieces);
}

}  // namespace tenyisyl
