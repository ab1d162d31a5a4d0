// Copyright 2026 The cmine Authors.
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

#ifndef CMINE_TEXT_UTIL_H_
#define CMINE_TEXT_UTIL_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cmine {

std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

bool is_valid_utf8(std::string_view s);

// Decodes one code point starting at s[pos]. Invalid sequences decode as a
// single byte with value 0xFFFD and length 1.
struct DecodedCodePoint {
  char32_t value;
  std::size_t length;
};
DecodedCodePoint decode_utf8(std::string_view s, std::size_t pos);
void append_utf8(std::string& out, char32_t cp);

// Word characters: ASCII letters and digits plus non-ASCII letters. Non-ASCII
// punctuation, symbols and spaces in the common blocks are separators.
bool is_word_code_point(char32_t cp);

// Simple one-to-one lowercase mapping for ASCII, Latin-1, Latin Extended-A,
// Greek and Cyrillic capitals. Other code points map to themselves.
char32_t to_lower_code_point(char32_t cp);

std::string casefold(std::string_view s);

}  // namespace cmine

#endif  // CMINE_TEXT_UTIL_H_
