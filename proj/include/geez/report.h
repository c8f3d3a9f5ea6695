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

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "geez/metrics.h"
#include "geez/stats_sig.h"
#include "json.hpp"

namespace geez {

enum class Direction { kEnToTi, kTiToEn };

std::string_view to_string(Direction d);        // "en_to_ti"
std::string_view display_name(Direction d);     // "English → Tigrinya"
std::optional<Direction> parse_direction(std::string_view name);

inline constexpr std::string_view kInDomain = "in-domain";

struct ScoreEntry {
  std::string system;
  Direction direction = Direction::kEnToTi;
  std::string domain = std::string(kInDomain);
  Metric metric = Metric::kBleu;
  double value = 0.0;

  bool operator==(const ScoreEntry&) const = default;
};

std::vector<ScoreEntry> entries_from_json(const nlohmann::json& j);
// Columns: system, direction, domain, metric, value. No header.
std::vector<ScoreEntry> parse_entries_tsv(std::string_view content);
// JSON when the first non-blank byte is '[', TSV otherwise.
std::vector<ScoreEntry> load_entries(const std::filesystem::path& path);

struct TableRow {
  std::string system;
  Direction direction = Direction::kEnToTi;
  std::string domain;
  std::optional<double> bleu;
  std::optional<double> chrf;
};

// Rows keyed by (system, direction, domain), ordered by first appearance of
// the system, then of the direction within it. Throws DataError on an empty
// list, a negative value, or a repeated (system, direction, metric).
std::vector<TableRow> build_table_rows(std::span<const ScoreEntry> entries);

enum class TableFormat { kText, kTsv, kJson };

// Scores print with two decimals; missing cells print "–".
std::string render_table(std::span<const TableRow> rows, TableFormat format);
std::string build_table(std::span<const ScoreEntry> entries, TableFormat format);

struct ComparisonRow {
  Direction direction = Direction::kEnToTi;
  Metric metric = Metric::kBleu;
  double baseline_value = 0.0;
  double candidate_value = 0.0;
  double delta = 0.0;  // candidate - baseline
  std::optional<SignificanceResult> significance;
};

struct ComparisonReport {
  std::string baseline;
  std::string candidate;
  std::vector<ComparisonRow> rows;  // baseline key order
  std::vector<ScoreEntry> unmatched;
};

// Pairs entries on (direction, metric). Entries without a partner land in
// `unmatched`. Throws DataError if either side repeats a key.
ComparisonReport compare(std::span<const ScoreEntry> baseline,
                         std::span<const ScoreEntry> candidate);

std::vector<ScoreEntry> entries_for_system(std::span<const ScoreEntry> entries,
                                           std::string_view system);

std::string render_comparison(const ComparisonReport& report, TableFormat format);

}  // namespace geez
