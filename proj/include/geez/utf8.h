// Copyright 2026 The geez-forge Authors.
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
#include <string>
#include <string_view>
#include <vector>

namespace geez::utf8 {

// Decodes UTF-8 into codepoints. Throws DataError naming the byte offset
// (relative to the start of `text` plus `base_offset`) of the first
// ill-formed sequence.
std::u32string decode(std::string_view text, std::size_t base_offset = 0);

std::string encode(std::u32string_view codepoints);
std::string encode(char32_t c);

// Byte offset of the first ill-formed sequence, or npos when valid.
std::size_t find_invalid(std::string_view text);

// Splits into whole-codepoint substrings. Input must be valid UTF-8.
std::vector<std::string> split_chars(std::string_view text);

}  // namespace geez::utf8
