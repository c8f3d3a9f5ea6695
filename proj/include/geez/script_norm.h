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
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"

namespace geez {

enum class ScriptClass { kEthiopic, kLatin, kDigit, kPunctuation, kWhitespace, kOther };

std::string_view to_string(ScriptClass cls);

// Total over all codepoints. Ethiopic means membership in U+1200-137F,
// U+1380-139F or U+2D80-2DDF, except the Ethiopic punctuation marks
// U+1360-1368 (wordspace and full stop included), which are punctuation.
ScriptClass classify_char(char32_t c);

struct NormalizationConfig {
  bool unicode_canonicalization = true;
  // Applied once per character; the first rule whose source matches wins.
  std::vector<std::pair<char32_t, char32_t>> char_map;
  bool strip_controls = true;
  // Whitespace runs become one U+0020; leading and trailing runs are dropped.
  bool collapse_whitespace = true;

  // Throws ConfigError when char_map has a self-map, a repeated source, or a
  // target that is itself rewritten by another rule.
  void validate() const;

  bool operator==(const NormalizationConfig&) const = default;
};

NormalizationConfig normalization_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const NormalizationConfig& cfg);
NormalizationConfig load_normalization_config(const std::filesystem::path& path);

// A validated config ready for repeated use.
class Normalizer {
 public:
  explicit Normalizer(NormalizationConfig cfg);

  std::string operator()(std::string_view text) const;

  const NormalizationConfig& config() const { return cfg_; }

 private:
  std::string apply_once(std::string_view text) const;

  NormalizationConfig cfg_;
  std::unordered_map<char32_t, char32_t> map_;
};

// NFC (if enabled), then char_map, then control stripping, then whitespace
// collapsing. The result is a fixed point of the same call.
std::string normalize(std::string_view text, const NormalizationConfig& cfg);

struct ScriptProfile {
  std::size_t total_chars = 0;  // whitespace excluded
  double ethiopic_fraction = 0.0;
  double latin_fraction = 0.0;
  double digit_fraction = 0.0;
  double punct_fraction = 0.0;
  double other_fraction = 0.0;
};

ScriptProfile script_profile(std::string_view text);

// Splits on runs of Unicode whitespace; no empty tokens.
std::vector<std::string> split_whitespace(std::string_view text);

}  // namespace geez
