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

#include "geez/report.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "geez/error.h"
#include "text_table.h"

namespace geez {
namespace {

constexpr std::string_view kMissing = "–";

ScoreEntry make_entry(std::string system, std::string_view direction, std::string domain,
                      std::string_view metric, double value, const std::string& where) {
  ScoreEntry e;
  e.system = std::move(system);
  const auto d = parse_direction(direction);
  if (!d) throw DataError(where + ": unknown direction \"" + std::string(direction) + "\"");
  e.direction = *d;
  const auto m = parse_metric(metric);
  if (!m) throw DataError(where + ": unknown metric \"" + std::string(metric) + "\"");
  e.metric = *m;
  if (!domain.empty()) e.domain = std::move(domain);
  if (!(value >= 0.0)) throw DataError(where + ": score values must be non-negative");
  e.value = value;
  return e;
}

std::string cell(const std::optional<double>& v) {
  return v ? detail::format_fixed(*v, 2) : std::string(kMissing);
}

std::string signed_cell(double v) {
  std::string s = detail::format_fixed(v, 2);
  if (!s.starts_with("-")) s.insert(0, "+");
  return s;
}

nlohmann::json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::string join_tsv(const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out.push_back('\t');
      out += row[i];
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace

std::string_view to_string(Direction d) {
  return d == Direction::kEnToTi ? "en_to_ti" : "ti_to_en";
}

std::string_view display_name(Direction d) {
  return d == Direction::kEnToTi ? "English → Tigrinya" : "Tigrinya → English";
}

std::optional<Direction> parse_direction(std::string_view name) {
  if (name == "en_to_ti") return Direction::kEnToTi;
  if (name == "ti_to_en") return Direction::kTiToEn;
  return std::nullopt;
}

std::vector<ScoreEntry> entries_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw DataError("score entries must be a JSON array");
  std::vector<ScoreEntry> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& item = j[i];
    const std::string where = "entry " + std::to_string(i);
    if (!item.is_object()) throw DataError(where + ": expected an object");
    for (const char* key : {"system", "direction", "metric"}) {
      if (!item.contains(key) || !item[key].is_string()) {
        throw DataError(where + ": missing string field \"" + key + "\"");
      }
    }
    if (!item.contains("value") || !item["value"].is_number()) {
      throw DataError(where + ": missing numeric field \"value\"");
    }
    std::string domain;
    if (item.contains("domain")) {
      if (!item["domain"].is_string()) throw DataError(where + ": \"domain\" must be a string");
      domain = item["domain"].get<std::string>();
    }
    out.push_back(make_entry(item["system"].get<std::string>(),
                             item["direction"].get<std::string>(), std::move(domain),
                             item["metric"].get<std::string>(), item["value"].get<double>(), where));
  }
  return out;
}

std::vector<ScoreEntry> parse_entries_tsv(std::string_view content) {
  std::vector<ScoreEntry> out;
  std::istringstream in{std::string(content)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.ends_with('\r')) line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::istringstream row(line);
    std::string col;
    while (std::getline(row, col, '\t')) cols.push_back(col);
    const std::string where = "line " + std::to_string(line_no);
    if (cols.size() != 5) throw DataError(where + ": expected 5 tab-separated columns");
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(cols[4], &used);
      if (used != cols[4].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw DataError(where + ": bad score value \"" + cols[4] + "\"");
    }
    out.push_back(make_entry(cols[0], cols[1], cols[2], cols[3], value, where));
  }
  return out;
}

std::vector<ScoreEntry> load_entries(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    try {
      return entries_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError("malformed entries file " + path.string() + ": " + e.what());
    }
  }
  return parse_entries_tsv(text);
}

std::vector<TableRow> build_table_rows(std::span<const ScoreEntry> entries) {
  if (entries.empty()) throw DataError("cannot build a table from no entries");
  std::vector<std::string> systems;
  for (const ScoreEntry& e : entries) {
    if (!(e.value >= 0.0)) throw DataError("score values must be non-negative");
    if (std::find(systems.begin(), systems.end(), e.system) == systems.end()) {
      systems.push_back(e.system);
    }
  }
  std::vector<TableRow> rows;
  for (const std::string& system : systems) {
    std::vector<Direction> directions;
    for (const ScoreEntry& e : entries) {
      if (e.system == system &&
          std::find(directions.begin(), directions.end(), e.direction) == directions.end()) {
        directions.push_back(e.direction);
      }
    }
    for (Direction d : directions) {
      const std::size_t first_row = rows.size();
      for (const ScoreEntry& e : entries) {
        if (e.system != system || e.direction != d) continue;
        auto it = std::find_if(rows.begin() + static_cast<std::ptrdiff_t>(first_row), rows.end(),
                               [&](const TableRow& r) { return r.domain == e.domain; });
        if (it == rows.end()) {
          rows.push_back(TableRow{system, d, e.domain, std::nullopt, std::nullopt});
          it = rows.end() - 1;
        }
        // Duplicate check spans domains: (system, direction, metric) is the key.
        for (auto r = rows.begin() + static_cast<std::ptrdiff_t>(first_row); r != rows.end(); ++r) {
          const auto& slot = e.metric == Metric::kBleu ? r->bleu : r->chrf;
          if (slot) {
            throw DataError("duplicate entry for system \"" + system + "\", direction " +
                            std::string(to_string(d)) + ", metric " +
                            std::string(to_string(e.metric)));
          }
        }
        (e.metric == Metric::kBleu ? it->bleu : it->chrf) = e.value;
      }
    }
  }
  return rows;
}

std::string render_table(std::span<const TableRow> rows, TableFormat format) {
  if (format == TableFormat::kJson) {
    nlohmann::json arr = nlohmann::json::array();
    for (const TableRow& r : rows) {
      arr.push_back({{"system", r.system},
                     {"direction", to_string(r.direction)},
                     {"domain", r.domain},
                     {"bleu", optional_json(r.bleu)},
                     {"chrf", optional_json(r.chrf)}});
    }
    return arr.dump(2) + "\n";
  }
  std::vector<std::vector<std::string>> table;
  table.push_back({"System", "Direction", "Domain", "BLEU", "chrF"});
  for (const TableRow& r : rows) {
    table.push_back({r.system,
                     std::string(format == TableFormat::kText ? display_name(r.direction)
                                                              : to_string(r.direction)),
                     r.domain, cell(r.bleu), cell(r.chrf)});
  }
  return format == TableFormat::kText ? detail::render_text_table(table) : join_tsv(table);
}

std::string build_table(std::span<const ScoreEntry> entries, TableFormat format) {
  return render_table(build_table_rows(entries), format);
}

std::vector<ScoreEntry> entries_for_system(std::span<const ScoreEntry> entries,
                                           std::string_view system) {
  std::vector<ScoreEntry> out;
  for (const ScoreEntry& e : entries) {
    if (e.system == system) out.push_back(e);
  }
  return out;
}

ComparisonReport compare(std::span<const ScoreEntry> baseline,
                         std::span<const ScoreEntry> candidate) {
  auto same_key = [](const ScoreEntry& a, const ScoreEntry& b) {
    return a.direction == b.direction && a.metric == b.metric;
  };
  auto check_unique = [&](std::span<const ScoreEntry> side, std::string_view name) {
    for (std::size_t i = 0; i < side.size(); ++i) {
      for (std::size_t k = i + 1; k < side.size(); ++k) {
        if (same_key(side[i], side[k])) {
          throw DataError(std::string(name) + " repeats direction " +
                          std::string(to_string(side[i].direction)) + ", metric " +
                          std::string(to_string(side[i].metric)));
        }
      }
    }
  };
  check_unique(baseline, "baseline");
  check_unique(candidate, "candidate");

  ComparisonReport report;
  if (!baseline.empty()) report.baseline = baseline.front().system;
  if (!candidate.empty()) report.candidate = candidate.front().system;
  std::vector<bool> used(candidate.size(), false);
  for (const ScoreEntry& b : baseline) {
    auto it = std::find_if(candidate.begin(), candidate.end(),
                           [&](const ScoreEntry& c) { return same_key(b, c); });
    if (it == candidate.end()) {
      report.unmatched.push_back(b);
      continue;
    }
    used[static_cast<std::size_t>(it - candidate.begin())] = true;
    report.rows.push_back(ComparisonRow{b.direction, b.metric, b.value, it->value,
                                        it->value - b.value, std::nullopt});
  }
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    if (!used[i]) report.unmatched.push_back(candidate[i]);
  }
  return report;
}

std::string render_comparison(const ComparisonReport& report, TableFormat format) {
  if (format == TableFormat::kJson) {
    nlohmann::json rows = nlohmann::json::array();
    for (const ComparisonRow& r : report.rows) {
      nlohmann::json row = {{"direction", to_string(r.direction)},
                            {"metric", to_string(r.metric)},
                            {"baseline", r.baseline_value},
                            {"candidate", r.candidate_value},
                            {"delta", r.delta}};
      if (r.significance) row["significance"] = to_json(*r.significance);
      rows.push_back(std::move(row));
    }
    nlohmann::json unmatched = nlohmann::json::array();
    for (const ScoreEntry& e : report.unmatched) {
      unmatched.push_back({{"system", e.system},
                           {"direction", to_string(e.direction)},
                           {"domain", e.domain},
                           {"metric", to_string(e.metric)},
                           {"value", e.value}});
    }
    const nlohmann::json j = {{"baseline", report.baseline},
                              {"candidate", report.candidate},
                              {"rows", std::move(rows)},
                              {"unmatched", std::move(unmatched)}};
    return j.dump(2) + "\n";
  }
  std::vector<std::vector<std::string>> table;
  table.push_back({"Direction", "Metric", report.baseline, report.candidate, "Delta", ""});
  for (const ComparisonRow& r : report.rows) {
    const bool sig = r.significance && r.significance->significant;
    table.push_back({std::string(format == TableFormat::kText ? display_name(r.direction)
                                                              : to_string(r.direction)),
                     r.metric == Metric::kBleu ? "BLEU" : "chrF",
                     detail::format_fixed(r.baseline_value, 2),
                     detail::format_fixed(r.candidate_value, 2), signed_cell(r.delta),
                     sig ? "*" : ""});
  }
  std::string out =
      format == TableFormat::kText ? detail::render_text_table(table) : join_tsv(table);
  for (const ScoreEntry& e : report.unmatched) {
    out += "unmatched\t" + e.system + "\t" + std::string(to_string(e.direction)) + "\t" +
           std::string(to_string(e.metric)) + "\t" + detail::format_fixed(e.value, 2) + "\n";
  }
  return out;
}

}  // namespace geez
