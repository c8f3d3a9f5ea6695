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

#include "geez/script_norm.h"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/uscript.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "geez/error.h"
#include "geez/utf8.h"

namespace geez {
namespace {

std::string codepoint_label(char32_t c) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "U+%04X", static_cast<unsigned>(c));
  return buf;
}

bool is_ethiopic_block(char32_t c) {
  return (c >= 0x1200 && c <= 0x137F) || (c >= 0x1380 && c <= 0x139F) ||
         (c >= 0x2D80 && c <= 0x2DDF);
}

bool is_strippable(char32_t c) {
  const auto type = u_charType(static_cast<UChar32>(c));
  if (type == U_FORMAT_CHAR) return true;
  return type == U_CONTROL_CHAR && !u_isUWhiteSpace(static_cast<UChar32>(c));
}

std::string nfc(std::string_view text) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* norm = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw ConfigError("ICU NFC normalizer unavailable");
  const auto src = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  icu::UnicodeString dst;
  norm->normalize(src, dst, status);
  if (U_FAILURE(status)) throw DataError("NFC normalization failed");
  std::string out;
  dst.toUTF8String(out);
  return out;
}

char32_t single_codepoint(const nlohmann::json& j) {
  if (!j.is_string()) throw ConfigError("char_map entries must be strings");
  const auto s = j.get<std::string>();
  std::u32string cps;
  try {
    cps = utf8::decode(s);
  } catch (const DataError& e) {
    throw ConfigError(std::string("char_map: ") + e.what());
  }
  if (cps.size() != 1) {
    throw ConfigError("char_map entry \"" + s + "\" is not a single codepoint");
  }
  return cps[0];
}

}  // namespace

std::string_view to_string(ScriptClass cls) {
  switch (cls) {
    case ScriptClass::kEthiopic: return "ethiopic";
    case ScriptClass::kLatin: return "latin";
    case ScriptClass::kDigit: return "digit";
    case ScriptClass::kPunctuation: return "punctuation";
    case ScriptClass::kWhitespace: return "whitespace";
    case ScriptClass::kOther: return "other";
  }
  return "other";
}

ScriptClass classify_char(char32_t c) {
  if (c > 0x10FFFF) return ScriptClass::kOther;
  const auto uc = static_cast<UChar32>(c);
  if (u_isUWhiteSpace(uc)) return ScriptClass::kWhitespace;
  if (is_ethiopic_block(c)) {
    return (c >= 0x1360 && c <= 0x1368) ? ScriptClass::kPunctuation : ScriptClass::kEthiopic;
  }
  if (u_isdigit(uc)) return ScriptClass::kDigit;
  if (u_ispunct(uc)) return ScriptClass::kPunctuation;
  UErrorCode status = U_ZERO_ERROR;
  if (u_isalpha(uc) && uscript_getScript(uc, &status) == USCRIPT_LATIN) {
    return ScriptClass::kLatin;
  }
  return ScriptClass::kOther;
}

void NormalizationConfig::validate() const {
  std::unordered_set<char32_t> sources;
  for (const auto& [from, to] : char_map) {
    if (from > 0x10FFFF || to > 0x10FFFF) {
      throw ConfigError("char_map contains a codepoint outside the Unicode range");
    }
    if (from == to) {
      throw ConfigError("char_map maps " + codepoint_label(from) + " to itself");
    }
    if (!sources.insert(from).second) {
      throw ConfigError("char_map lists " + codepoint_label(from) + " more than once");
    }
  }
  for (const auto& [from, to] : char_map) {
    if (sources.count(to)) {
      throw ConfigError("char_map target " + codepoint_label(to) + " of " +
                        codepoint_label(from) + " is itself rewritten");
    }
  }
}

NormalizationConfig normalization_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("normalization config must be a JSON object");
  NormalizationConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "unicode_canonicalization" || key == "strip_controls" ||
        key == "collapse_whitespace") {
      if (!value.is_boolean()) throw ConfigError("\"" + key + "\" must be a boolean");
      const bool flag = value.get<bool>();
      if (key == "unicode_canonicalization") cfg.unicode_canonicalization = flag;
      else if (key == "strip_controls") cfg.strip_controls = flag;
      else cfg.collapse_whitespace = flag;
    } else if (key == "char_map") {
      if (!value.is_array()) throw ConfigError("\"char_map\" must be an array");
      for (const auto& rule : value) {
        if (!rule.is_array() || rule.size() != 2) {
          throw ConfigError("char_map rules must be two-element arrays");
        }
        cfg.char_map.emplace_back(single_codepoint(rule[0]), single_codepoint(rule[1]));
      }
    } else {
      throw ConfigError("unknown normalization config key \"" + key + "\"");
    }
  }
  cfg.validate();
  return cfg;
}

nlohmann::json to_json(const NormalizationConfig& cfg) {
  nlohmann::json rules = nlohmann::json::array();
  for (const auto& [from, to] : cfg.char_map) {
    rules.push_back({utf8::encode(from), utf8::encode(to)});
  }
  return {
      {"char_map", std::move(rules)},
      {"collapse_whitespace", cfg.collapse_whitespace},
      {"strip_controls", cfg.strip_controls},
      {"unicode_canonicalization", cfg.unicode_canonicalization},
  };
}

NormalizationConfig load_normalization_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open normalization config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("malformed normalization config " + path.string() + ": " + e.what());
  }
  return normalization_config_from_json(j);
}

Normalizer::Normalizer(NormalizationConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  for (const auto& [from, to] : cfg_.char_map) map_.emplace(from, to);
}

std::string Normalizer::apply_once(std::string_view text) const {
  const std::string composed = cfg_.unicode_canonicalization ? nfc(text) : std::string(text);
  const std::u32string cps = utf8::decode(composed);

  std::u32string out;
  out.reserve(cps.size());
  bool pending_space = false;
  for (char32_t c : cps) {
    if (auto it = map_.find(c); it != map_.end()) c = it->second;
    if (cfg_.strip_controls && is_strippable(c)) continue;
    if (cfg_.collapse_whitespace && u_isUWhiteSpace(static_cast<UChar32>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(U' ');
      pending_space = false;
    }
    out.push_back(c);
  }
  return utf8::encode(out);
}

std::string Normalizer::operator()(std::string_view text) const {
  // One pass is a fixed point except when stripping or mapping exposes a new
  // canonical composition; iterate until stable.
  utf8::decode(text);  // ICU would silently substitute U+FFFD for bad bytes
  std::string current = apply_once(text);
  for (int i = 0; i < 8; ++i) {
    std::string next = apply_once(current);
    if (next == current) break;
    current = std::move(next);
  }
  return current;
}

std::string normalize(std::string_view text, const NormalizationConfig& cfg) {
  return Normalizer(cfg)(text);
}

ScriptProfile script_profile(std::string_view text) {
  std::size_t counts[6] = {};
  for (char32_t c : utf8::decode(text)) ++counts[static_cast<int>(classify_char(c))];
  ScriptProfile p;
  const auto ws = static_cast<int>(ScriptClass::kWhitespace);
  for (int i = 0; i < 6; ++i) {
    if (i != ws) p.total_chars += counts[i];
  }
  if (p.total_chars == 0) return p;
  const double total = static_cast<double>(p.total_chars);
  p.ethiopic_fraction = counts[static_cast<int>(ScriptClass::kEthiopic)] / total;
  p.latin_fraction = counts[static_cast<int>(ScriptClass::kLatin)] / total;
  p.digit_fraction = counts[static_cast<int>(ScriptClass::kDigit)] / total;
  p.punct_fraction = counts[static_cast<int>(ScriptClass::kPunctuation)] / total;
  p.other_fraction = counts[static_cast<int>(ScriptClass::kOther)] / total;
  return p;
}

std::vector<std::string> split_whitespace(std::string_view text) {
  std::vector<std::string> out;
  std::u32string current;
  for (char32_t c : utf8::decode(text)) {
    if (u_isUWhiteSpace(static_cast<UChar32>(c))) {
      if (!current.empty()) out.push_back(utf8::encode(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) out.push_back(utf8::encode(current));
  return out;
}

}  // namespace geez
