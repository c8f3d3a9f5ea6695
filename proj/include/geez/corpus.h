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
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "geez/script_norm.h"
#include "json.hpp"

namespace geez {

enum class Domain { kReligious, kNews, kHealth, kEducation, kOther };

std::string_view to_string(Domain d);
std::optional<Domain> parse_domain(std::string_view name);

struct SentencePair {
  std::size_t id = 0;
  std::string source_text;  // English
  std::string target_text;  // Tigrinya
  std::optional<Domain> domain;

  bool operator==(const SentencePair&) const = default;
};

enum class CorpusFormat { kTsv, kMoses };

// TSV: `source TAB target [TAB domain]` per line, no header. An empty line
// is read as a blank-vs-blank pair. `name` appears in error messages.
std::vector<SentencePair> parse_tsv(std::string_view content, std::string_view name = "<tsv>");
std::vector<SentencePair> read_tsv(const std::filesystem::path& path);
// Moses: two line-aligned files, English first.
std::vector<SentencePair> read_moses(const std::filesystem::path& source,
                                     const std::filesystem::path& target);
// One path for kTsv, two for kMoses.
std::vector<SentencePair> read_parallel(std::span<const std::filesystem::path> paths,
                                        CorpusFormat format);

void write_tsv(std::ostream& out, std::span<const SentencePair> pairs);
void write_tsv(const std::filesystem::path& path, std::span<const SentencePair> pairs);

struct FilterConfig {
  std::size_t max_tokens = 128;
  std::size_t min_tokens = 1;
  double max_length_ratio = 3.0;
  double min_target_ethiopic_fraction = 0.5;
  bool require_numeral_consistency = true;

  void validate() const;
};

FilterConfig filter_config_from_json(const nlohmann::json& j);
FilterConfig load_filter_config(const std::filesystem::path& path);
nlohmann::json to_json(const FilterConfig& cfg);

inline constexpr std::string_view kFilterNonEmpty = "non_empty";
inline constexpr std::string_view kFilterTokenBounds = "token_bounds";
inline constexpr std::string_view kFilterLengthRatio = "length_ratio";
inline constexpr std::string_view kFilterScriptPurity = "script_purity";
inline constexpr std::string_view kFilterNumeralConsistency = "numeral_consistency";

struct CleaningReport {
  std::size_t input_count = 0;
  std::size_t kept_count = 0;
  std::size_t removed_count = 0;
  // Every filter name is present; a pair failing several filters is counted
  // under each of them.
  std::map<std::string, std::size_t> per_filter_counts;
  std::vector<std::size_t> removed_ids;
};

nlohmann::json to_json(const CleaningReport& report);

struct CleanResult {
  std::vector<SentencePair> kept;  // normalized, input order
  CleaningReport report;
};

CleanResult clean(std::span<const SentencePair> pairs, const FilterConfig& cfg,
                  const NormalizationConfig& norm);

// ASCII digit runs with "," and U+060C grouping separators removed, sorted.
std::vector<std::string> digit_runs(std::string_view text);

struct AlignmentVerdict {
  std::vector<std::string> failed_checks;

  bool aligned() const { return failed_checks.empty(); }
};

// Length-ratio and numeral-consistency checks only.
AlignmentVerdict verify_alignment(const SentencePair& pair, const FilterConfig& cfg,
                                  const NormalizationConfig& norm);

struct SplitRatios {
  double train = 0.8;
  double valid = 0.1;
  double test = 0.1;
};

struct CorpusSplit {
  std::vector<SentencePair> train;
  std::vector<SentencePair> valid;
  std::vector<SentencePair> test;
};

// Shuffles with SplitMix64(seed) (see prng.h); valid and test receive
// floor(n * ratio) pairs, train the rest.
CorpusSplit split(std::span<const SentencePair> pairs, const SplitRatios& ratios, uint64_t seed);

struct DomainManifest {
  std::string domain;
  std::string source_label;
  std::size_t sentence_count = 0;
  std::optional<double> avg_len_source;  // whitespace tokens, 1 decimal
  std::optional<double> avg_len_target;
  std::string notes;
};

inline constexpr std::string_view kTotalRow = "total";

// One row per domain present (untagged pairs count as "other"), in
// religious, news, health, education, other order, then a "total" row.
std::vector<DomainManifest> compute_stats(std::span<const SentencePair> pairs);

enum class ManifestFormat { kText, kTsv, kJson };

std::string render_manifests(std::span<const DomainManifest> rows, ManifestFormat format);

}  // namespace geez
