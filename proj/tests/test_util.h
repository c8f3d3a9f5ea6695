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

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "geez/utf8.h"

namespace geez::testing {

inline std::string fixture(const std::string& name) { return std::string(GEEZ_FIXTURES) + "/" + name; }

inline std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Random strings drawn from `alphabet`, 0..max_len codepoints long.
inline std::vector<std::string> random_strings(const std::u32string& alphabet, std::size_t count,
                                               std::size_t max_len, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < count; ++i) {
    std::u32string s;
    for (std::size_t k = len(rng); k > 0; --k) s.push_back(alphabet[pick(rng)]);
    out.push_back(utf8::encode(s));
  }
  return out;
}

}  // namespace geez::testing
