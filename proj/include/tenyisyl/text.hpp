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

#include <stdexcept>
#include <string>
#include <string_view>

namespace tenyisyl {

struct Utf8Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Decodes UTF-8 bytes into codepoints. Throws Utf8Error on malformed input.
std::u32string utf8_decode(std::string_view bytes);

/// Encodes codepoints back to UTF-8.
std::string utf8_encode(std::u32string_view text);

/// Encodes a single codepoint (handy for diagnostics).
std::string utf8_encode(char32_t cp);

/// Canonical text form used everywhere downstream: ASCII letters lowercased,
/// U+00DC lowercased, and "u" + U+0308 composed into U+00FC so the corpus
/// never holds two spellings of the same letter.
std::u32string canonicalize(std::u32string_view text);

}  // namespace tenyisyl
