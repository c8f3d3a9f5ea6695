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

#include "geez/corpus.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "geez/error.h"
#include "geez/prng.h"
#include "geez/utf8.h"
#include "text_table.h"

namespace geez {
namespace {

constexpr std::array<Domain, 5> kDomainOrder = {Domain::kReligious, Domain::kNews,
                                                Domain::kHealth, Domain::kEducation,
                                                Domain::kOther};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + path.string());
  return buf.str();
}

void check_utf8(std::string_view content, std::string_view name) {
  if (const auto at = utf8::find_invalid(content); at != std::string_view::npos) {
    throw DataError(std::string(name) + ": invalid UTF-8 at byte offset " + std::to_string(at));
  }
}

// Splits on LF; a trailing LF does not start another line. CR before LF is
// dropped.
std::vector<std::string_view> split_lines(std::string_view content) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < content.size()) {
    std::size_t end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(start, end - start);
    if (line.ends_with('\r')) line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::string capitalized(std::string_view s) {
  std::string out(s);
  if (!out.empty() && out[0] >= 'a' && out[0] <= 'z') out[0] = static_cast<char>(out[0] - 'a' + 'A');
  return out;
}

std::string with_thousands(std::size_t n) {
  std::string digits = std::to_string(n);
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i != 0 && (digits.size() - i) % 3 == 0) out.push_back(',');
    out.push_back(digits[i]);
  }
  return out;
}

// Mean rounded half-up to one decimal, computed in integers.
double mean_one_decimal(std::size_t total, std::size_t count) {
  const std::size_t tenths = (20 * total + count) / (2 * count);
  return static_cast<double>(tenths) / 10.0;
}

bool length_ratio_ok(std::size_t a, std::size_t b, double max_ratio) {
  const std::size_t longer = std::max(a, b);
  const std::size_t shorter = std::min(a, b);
  if (longer == 0) return true;
  if (shorter == 0) return false;
  return static_cast<double>(longer) / static_cast<double>(shorter) <= max_ratio;
}

}  // namespace

std::string_view to_string(Domain d) {
  switch (d) {
    case Domain::kReligious: return "religious";
    case Domain::kNews: return "news";
    case Domain::kHealth: return "health";
    case Domain::kEducation: return "education";
    case Domain::kOther: return "other";
  }
  return "other";
}

std::optional<Domain> parse_domain(std::string_view name) {
  for (Domain d : kDomainOrder) {
    if (to_string(d) == name) return d;
  }
  return std::nullopt;
}

std::vector<SentencePair> parse_tsv(std::string_view content, std::string_view name) {
  check_utf8(content, name);
  std::vector<SentencePair> pairs;
  const auto lines = split_lines(content);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::string_view line = lines[n];
    SentencePair pair;
    pair.id = pairs.size();
    if (!line.empty()) {
      std::vector<std::string_view> cols;
      std::size_t start = 0;
      while (true) {
        const std::size_t tab = line.find('\t', start);
        cols.push_back(line.substr(start, tab == std::string_view::npos ? tab : tab - start));
        if (tab == std::string_view::npos) break;
        start = tab + 1;
      }
      if (cols.size() < 2 || cols.size() > 3) {
        throw DataError(std::string(name) + ":" + std::to_string(n + 1) + ": expected 2 or 3 " +
                        "tab-separated columns, found " + std::to_string(cols.size()));
      }
      pair.source_text = cols[0];
      pair.target_text = cols[1];
      if (cols.size() == 3 && !cols[2].empty()) {
        pair.domain = parse_domain(cols[2]);
        if (!pair.domain) {
          throw DataError(std::string(name) + ":" + std::to_string(n + 1) + ": unknown domain \"" +
                          std::string(cols[2]) + "\"");
        }
      }
    }
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

std::vector<SentencePair> read_tsv(const std::filesystem::path& path) {
  return parse_tsv(read_file(path), path.string());
}

std::vector<SentencePair> read_moses(const std::filesystem::path& source,
                                     const std::filesystem::path& target) {
  const std::string src = read_file(source);
  const std::string tgt = read_file(target);
  check_utf8(src, source.string());
  check_utf8(tgt, target.string());
  const auto src_lines = split_lines(src);
  const auto tgt_lines = split_lines(tgt);
  if (src_lines.size() != tgt_lines.size()) {
    throw DataError("line-count mismatch: " + source.string() + " has " +
                    std::to_string(src_lines.size()) + " lines, " + target.string() + " has " +
                    std::to_string(tgt_lines.size()));
  }
  std::vector<SentencePair> pairs(src_lines.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    pairs[i].id = i;
    pairs[i].source_text = src_lines[i];
    pairs[i].target_text = tgt_lines[i];
  }
  return pairs;
}

std::vector<SentencePair> read_parallel(std::span<const std::filesystem::path> paths,
                                        CorpusFormat format) {
  if (format == CorpusFormat::kTsv) {
    if (paths.size() != 1) throw ConfigError("TSV input takes exactly one file");
    return read_tsv(paths[0]);
  }
  if (paths.size() != 2) throw ConfigError("Moses input takes exactly two files");
  return read_moses(paths[0], paths[1]);
}

void write_tsv(std::ostream& out, std::span<const SentencePair> pairs) {
  for (const SentencePair& p : pairs) {
    for (const std::string* field : {&p.source_text, &p.target_text}) {
      if (field->find_first_of("\t\n") != std::string::npos) {
        throw DataError("pair " + std::to_string(p.id) + " contains a tab or newline");
      }
    }
    out << p.source_text << '\t' << p.target_text;
    if (p.domain) out << '\t' << to_string(*p.domain);
    out << '\n';
  }
}

void write_tsv(const std::filesystem::path& path, std::span<const SentencePair> pairs) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  write_tsv(out, pairs);
  if (!out) throw IoError("failed writing " + path.string());
}

void FilterConfig::validate() const {
  if (!(max_length_ratio >= 1.0)) throw ConfigError("max_length_ratio must be >= 1");
  if (!(min_target_ethiopic_fraction >= 0.0 && min_target_ethiopic_fraction <= 1.0)) {
    throw ConfigError("min_target_ethiopic_fraction must lie in [0, 1]");
  }
  if (min_tokens > max_tokens) throw ConfigError("min_tokens exceeds max_tokens");
}

FilterConfig filter_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("filter config must be a JSON object");
  FilterConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "max_tokens" || key == "min_tokens") {
      if (!value.is_number_integer() || value.get<int64_t>() < 0) throw ConfigError("\"" + key + "\" must be a non-negative integer");
      (key == "max_tokens" ? cfg.max_tokens : cfg.min_tokens) = value.get<std::size_t>();
    } else if (key == "max_length_ratio" || key == "min_target_ethiopic_fraction") {
      if (!value.is_number()) throw ConfigError("\"" + key + "\" must be a number");
      (key == "max_length_ratio" ? cfg.max_length_ratio : cfg.min_target_ethiopic_fraction) =
          value.get<double>();
    } else if (key == "require_numeral_consistency") {
      if (!value.is_boolean()) throw ConfigError("\"" + key + "\" must be a boolean");
      cfg.require_numeral_consistency = value.get<bool>();
    } else {
      throw ConfigError("unknown filter config key \"" + key + "\"");
    }
  }
  cfg.validate();
  return cfg;
}

FilterConfig load_filter_config(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return filter_config_from_json(nlohmann::json::parse(text));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("malformed filter config " + path.string() + ": " + e.what());
  }
}

nlohmann::json to_json(const FilterConfig& cfg) {
  return {{"max_length_ratio", cfg.max_length_ratio},
          {"max_tokens", cfg.max_tokens},
          {"min_target_ethiopic_fraction", cfg.min_target_ethiopic_fraction},
          {"min_tokens", cfg.min_tokens},
          {"require_numeral_consistency", cfg.require_numeral_consistency}};
}

nlohmann::json to_json(const CleaningReport& report) {
  return {{"input_count", report.input_count},
          {"kept_count", report.kept_count},
          {"removed_count", report.removed_count},
          {"per_filter_counts", report.per_filter_counts},
          {"removed_ids", report.removed_ids}};
}

std::vector<std::string> digit_runs(std::string_view text) {
  const std::u32string cps = utf8::decode(text);
  auto is_digit = [](char32_t c) { return c >= U'0' && c <= U'9'; };
  auto is_separator = [](char32_t c) { return c == U',' || c == U'،'; };
  std::vector<std::string> runs;
  std::string current;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const char32_t c = cps[i];
    if (is_digit(c)) {
      current.push_back(static_cast<char>(c));
    } else if (!current.empty() && is_separator(c) && i + 1 < cps.size() && is_digit(cps[i + 1])) {
      continue;
    } else if (!current.empty()) {
      runs.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) runs.push_back(std::move(current));
  std::sort(runs.begin(), runs.end());
  return runs;
}

CleanResult clean(std::span<const SentencePair> pairs, const FilterConfig& cfg,
                  const NormalizationConfig& norm) {
  cfg.validate();
  const Normalizer normalizer(norm);
  CleanResult result;
  CleaningReport& report = result.report;
  report.input_count = pairs.size();
  for (std::string_view name : {kFilterNonEmpty, kFilterTokenBounds, kFilterLengthRatio,
                                kFilterScriptPurity, kFilterNumeralConsistency}) {
    report.per_filter_counts[std::string(name)] = 0;
  }

  for (const SentencePair& input : pairs) {
    SentencePair pair = input;
    pair.source_text = normalizer(input.source_text);
    pair.target_text = normalizer(input.target_text);

    std::vector<std::string_view> failed;
    const std::size_t src_tokens = split_whitespace(pair.source_text).size();
    const std::size_t tgt_tokens = split_whitespace(pair.target_text).size();
    if (src_tokens == 0 || tgt_tokens == 0) {
      // The remaining filters are undefined on an empty side.
      failed.push_back(kFilterNonEmpty);
    } else {
      auto in_bounds = [&](std::size_t n) { return n >= cfg.min_tokens && n <= cfg.max_tokens; };
      if (!in_bounds(src_tokens) || !in_bounds(tgt_tokens)) failed.push_back(kFilterTokenBounds);
      if (!length_ratio_ok(src_tokens, tgt_tokens, cfg.max_length_ratio)) {
        failed.push_back(kFilterLengthRatio);
      }
      if (script_profile(pair.target_text).ethiopic_fraction < cfg.min_target_ethiopic_fraction) {
        failed.push_back(kFilterScriptPurity);
      }
      if (cfg.require_numeral_consistency &&
          digit_runs(pair.source_text) != digit_runs(pair.target_text)) {
        failed.push_back(kFilterNumeralConsistency);
      }
    }

    if (failed.empty()) {
      result.kept.push_back(std::move(pair));
      continue;
    }
    for (std::string_view name : failed) ++report.per_filter_counts[std::string(name)];
    report.removed_ids.push_back(input.id);
  }
  report.kept_count = result.kept.size();
  report.removed_count = report.removed_ids.size();
  return result;
}

AlignmentVerdict verify_alignment(const SentencePair& pair, const FilterConfig& cfg,
                                  const NormalizationConfig& norm) {
  cfg.validate();
  const Normalizer normalizer(norm);
  const std::string source = normalizer(pair.source_text);
  const std::string target = normalizer(pair.target_text);
  AlignmentVerdict verdict;
  if (!length_ratio_ok(split_whitespace(source).size(), split_whitespace(target).size(),
                       cfg.max_length_ratio)) {
    verdict.failed_checks.emplace_back(kFilterLengthRatio);
  }
  if (digit_runs(source) != digit_runs(target)) {
    verdict.failed_checks.emplace_back(kFilterNumeralConsistency);
  }
  return verdict;
}

CorpusSplit split(std::span<const SentencePair> pairs, const SplitRatios& ratios, uint64_t seed) {
  for (double r : {ratios.train, ratios.valid, ratios.test}) {
    if (!(r > 0.0) || !std::isfinite(r)) throw ConfigError("split ratios must all be positive");
  }
  if (std::abs(ratios.train + ratios.valid + ratios.test - 1.0) > 1e-9) {
    throw ConfigError("split ratios must sum to 1");
  }
  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  SplitMix64 rng(seed);
  shuffle(order, rng);

  // The epsilon keeps products such as 10 * 0.7 from flooring one short.
  const double n = static_cast<double>(pairs.size());
  const auto valid_n = static_cast<std::size_t>(std::floor(n * ratios.valid + 1e-9));
  const auto test_n = static_cast<std::size_t>(std::floor(n * ratios.test + 1e-9));
  const std::size_t train_n = pairs.size() - valid_n - test_n;

  CorpusSplit out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const SentencePair& p = pairs[order[i]];
    if (i < train_n) {
      out.train.push_back(p);
    } else if (i < train_n + valid_n) {
      out.valid.push_back(p);
    } else {
      out.test.push_back(p);
    }
  }
  return out;
}

std::vector<DomainManifest> compute_stats(std::span<const SentencePair> pairs) {
  struct Totals {
    std::size_t count = 0;
    std::size_t source_tokens = 0;
    std::size_t target_tokens = 0;
  };
  std::array<Totals, kDomainOrder.size()> totals{};
  for (const SentencePair& p : pairs) {
    Totals& t = totals[static_cast<std::size_t>(p.domain.value_or(Domain::kOther))];
    ++t.count;
    t.source_tokens += split_whitespace(p.source_text).size();
    t.target_tokens += split_whitespace(p.target_text).size();
  }
  std::vector<DomainManifest> rows;
  std::size_t total_count = 0;
  for (Domain d : kDomainOrder) {
    const Totals& t = totals[static_cast<std::size_t>(d)];
    if (t.count == 0) continue;
    DomainManifest m;
    m.domain = to_string(d);
    m.sentence_count = t.count;
    m.avg_len_source = mean_one_decimal(t.source_tokens, t.count);
    m.avg_len_target = mean_one_decimal(t.target_tokens, t.count);
    rows.push_back(std::move(m));
    total_count += t.count;
  }
  DomainManifest total;
  total.domain = kTotalRow;
  total.sentence_count = total_count;
  rows.push_back(std::move(total));
  return rows;
}

std::string render_manifests(std::span<const DomainManifest> rows, ManifestFormat format) {
  if (format == ManifestFormat::kJson) {
    nlohmann::json arr = nlohmann::json::array();
    for (const DomainManifest& m : rows) {
      arr.push_back({{"domain", m.domain},
                     {"source_label", m.source_label},
                     {"sentence_count", m.sentence_count},
                     {"avg_len_source", m.avg_len_source ? nlohmann::json(*m.avg_len_source)
                                                         : nlohmann::json(nullptr)},
                     {"avg_len_target", m.avg_len_target ? nlohmann::json(*m.avg_len_target)
                                                         : nlohmann::json(nullptr)},
                     {"notes", m.notes}});
    }
    return arr.dump(2) + "\n";
  }

  std::vector<std::vector<std::string>> table;
  table.push_back({"Domain", "Source", "# Sents", "Avg Len (EN/TI)", "Notes"});
  for (const DomainManifest& m : rows) {
    std::string lengths = "–";
    if (m.avg_len_source && m.avg_len_target) {
      lengths = detail::format_fixed(*m.avg_len_source, 1) + " / " +
                detail::format_fixed(*m.avg_len_target, 1);
    }
    table.push_back({capitalized(m.domain), m.source_label.empty() ? "–" : m.source_label,
                     with_thousands(m.sentence_count), lengths, m.notes});
  }
  if (format == ManifestFormat::kText) return detail::render_text_table(table);

  std::string out;
  for (const auto& row : table) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out.push_back('\t');
      out += row[i];
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace geez
