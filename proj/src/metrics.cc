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

#include "geez/metrics.h"

#include <unicode/uchar.h>

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "geez/error.h"
#include "geez/utf8.h"
#include "text_table.h"

namespace geez {
namespace {

void check_corpora(std::span<const std::string> hyps, std::span<const std::string> refs) {
  if (hyps.empty() || refs.empty()) throw DataError("hypothesis and reference lists must be non-empty");
  if (hyps.size() != refs.size()) {
    throw DataError("length mismatch: " + std::to_string(hyps.size()) + " hypotheses vs " +
                    std::to_string(refs.size()) + " references");
  }
}

using NgramCounts = std::unordered_map<std::string, int64_t>;

NgramCounts word_ngrams(const std::vector<std::string>& tokens, std::size_t n) {
  NgramCounts counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (std::size_t k = 1; k < n; ++k) key += ' ' + tokens[i + k];
    ++counts[key];
  }
  return counts;
}

std::unordered_map<std::u32string, int64_t> char_ngrams(const std::u32string& chars, std::size_t n) {
  std::unordered_map<std::u32string, int64_t> counts;
  for (std::size_t i = 0; i + n <= chars.size(); ++i) ++counts[chars.substr(i, n)];
  return counts;
}

template <typename Counts>
int64_t clipped_matches(const Counts& hyp, const Counts& ref) {
  int64_t m = 0;
  for (const auto& [gram, count] : hyp) {
    if (auto it = ref.find(gram); it != ref.end()) m += std::min(count, it->second);
  }
  return m;
}

template <typename Counts>
int64_t total(const Counts& counts) {
  int64_t t = 0;
  for (const auto& entry : counts) t += entry.second;
  return t;
}

std::u32string without_whitespace(std::string_view text) {
  std::u32string out;
  for (char32_t c : utf8::decode(text)) {
    if (!u_isUWhiteSpace(static_cast<UChar32>(c))) out.push_back(c);
  }
  return out;
}

}  // namespace

std::string_view to_string(Metric m) { return m == Metric::kBleu ? "bleu" : "chrf"; }

std::optional<Metric> parse_metric(std::string_view name) {
  if (name == "bleu") return Metric::kBleu;
  if (name == "chrf") return Metric::kChrf;
  return std::nullopt;
}

BleuStats& BleuStats::operator+=(const BleuStats& other) {
  for (int n = 0; n < kBleuMaxOrder; ++n) {
    matches[n] += other.matches[n];
    hyp_ngrams[n] += other.hyp_ngrams[n];
    ref_ngrams[n] += other.ref_ngrams[n];
  }
  hyp_length += other.hyp_length;
  ref_length += other.ref_length;
  return *this;
}

std::vector<std::string> bleu_tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::u32string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(utf8::encode(current));
    current.clear();
  };
  for (char32_t c : utf8::decode(text)) {
    const auto uc = static_cast<UChar32>(c);
    if (u_isUWhiteSpace(uc)) {
      flush();
    } else if (u_ispunct(uc)) {
      flush();
      tokens.push_back(utf8::encode(c));
    } else {
      current.push_back(c);
    }
  }
  flush();
  return tokens;
}

BleuStats bleu_segment_stats(std::string_view hypothesis, std::string_view reference) {
  const auto hyp = bleu_tokenize(hypothesis);
  const auto ref = bleu_tokenize(reference);
  BleuStats s;
  s.hyp_length = static_cast<int64_t>(hyp.size());
  s.ref_length = static_cast<int64_t>(ref.size());
  for (int n = 0; n < kBleuMaxOrder; ++n) {
    const auto hc = word_ngrams(hyp, static_cast<std::size_t>(n + 1));
    const auto rc = word_ngrams(ref, static_cast<std::size_t>(n + 1));
    s.matches[n] = clipped_matches(hc, rc);
    s.hyp_ngrams[n] = total(hc);
    s.ref_ngrams[n] = total(rc);
  }
  return s;
}

BleuScore bleu_from_stats(const BleuStats& stats) {
  BleuScore out;
  out.hyp_length = stats.hyp_length;
  out.ref_length = stats.ref_length;
  if (stats.hyp_length == 0) {
    const bool both_empty = stats.ref_length == 0;
    out.precisions.fill(both_empty ? 1.0 : 0.0);
    out.brevity_penalty = both_empty ? 1.0 : 0.0;
    out.score = both_empty ? 100.0 : 0.0;
    return out;
  }
  for (int n = 0; n < kBleuMaxOrder; ++n) {
    const auto hyp_n = static_cast<double>(stats.hyp_ngrams[n]);
    if (stats.hyp_ngrams[n] == 0) {
      out.precisions[n] = stats.ref_ngrams[n] == 0 ? 1.0 : 0.5;
    } else if (stats.matches[n] == 0 && n > 0 && stats.matches[0] > 0) {
      out.precisions[n] = 1.0 / (2.0 * hyp_n);
    } else {
      out.precisions[n] = static_cast<double>(stats.matches[n]) / hyp_n;
    }
  }
  out.brevity_penalty =
      stats.hyp_length >= stats.ref_length
          ? 1.0
          : std::exp(1.0 - static_cast<double>(stats.ref_length) /
                               static_cast<double>(stats.hyp_length));
  if (*std::min_element(out.precisions.begin(), out.precisions.end()) == 0.0) {
    out.score = 0.0;
    return out;
  }
  double log_sum = 0.0;
  for (double p : out.precisions) log_sum += std::log(p);
  out.score = 100.0 * out.brevity_penalty * std::exp(log_sum / kBleuMaxOrder);
  return out;
}

BleuScore corpus_bleu(std::span<const std::string> hypotheses,
                      std::span<const std::string> references) {
  check_corpora(hypotheses, references);
  BleuStats stats;
  for (std::size_t i = 0; i < hypotheses.size(); ++i) {
    stats += bleu_segment_stats(hypotheses[i], references[i]);
  }
  return bleu_from_stats(stats);
}

ChrfStats& ChrfStats::operator+=(const ChrfStats& other) {
  const std::size_t n = std::max(matches.size(), other.matches.size());
  matches.resize(n, 0);
  hyp_ngrams.resize(n, 0);
  ref_ngrams.resize(n, 0);
  for (std::size_t i = 0; i < other.matches.size(); ++i) {
    matches[i] += other.matches[i];
    hyp_ngrams[i] += other.hyp_ngrams[i];
    ref_ngrams[i] += other.ref_ngrams[i];
  }
  return *this;
}

ChrfStats chrf_segment_stats(std::string_view hypothesis, std::string_view reference, int max_n) {
  if (max_n < 1) throw ConfigError("chrF order must be at least 1");
  const std::u32string hyp = without_whitespace(hypothesis);
  const std::u32string ref = without_whitespace(reference);
  ChrfStats s;
  for (int n = 1; n <= max_n; ++n) {
    const auto hc = char_ngrams(hyp, static_cast<std::size_t>(n));
    const auto rc = char_ngrams(ref, static_cast<std::size_t>(n));
    s.matches.push_back(clipped_matches(hc, rc));
    s.hyp_ngrams.push_back(total(hc));
    s.ref_ngrams.push_back(total(rc));
  }
  return s;
}

ChrfScore chrf_from_stats(const ChrfStats& stats, const ChrfConfig& cfg) {
  if (!(cfg.beta > 0.0)) throw ConfigError("chrF beta must be positive");
  ChrfScore out;
  out.beta = cfg.beta;
  out.max_n = cfg.max_n;
  const double b2 = cfg.beta * cfg.beta;
  double f_sum = 0.0;
  for (int n = 0; n < cfg.max_n; ++n) {
    const auto idx = static_cast<std::size_t>(n);
    const int64_t m = idx < stats.matches.size() ? stats.matches[idx] : 0;
    const int64_t h = idx < stats.hyp_ngrams.size() ? stats.hyp_ngrams[idx] : 0;
    const int64_t r = idx < stats.ref_ngrams.size() ? stats.ref_ngrams[idx] : 0;
    const double p = h > 0 ? static_cast<double>(m) / static_cast<double>(h) : 0.0;
    const double rec = r > 0 ? static_cast<double>(m) / static_cast<double>(r) : 0.0;
    const double denom = b2 * p + rec;
    const double f = denom > 0.0 ? (1.0 + b2) * p * rec / denom : 0.0;
    out.per_order_precision.push_back(p);
    out.per_order_recall.push_back(rec);
    out.per_order_f.push_back(f);
    if (h > 0 || r > 0) {
      ++out.effective_orders;
      f_sum += f;
    }
  }
  // Both sides empty everywhere: nothing differs, so the match is perfect.
  out.score = out.effective_orders > 0 ? 100.0 * f_sum / out.effective_orders : 100.0;
  return out;
}

ChrfScore corpus_chrf(std::span<const std::string> hypotheses,
                      std::span<const std::string> references, const ChrfConfig& cfg) {
  check_corpora(hypotheses, references);
  ChrfStats stats;
  for (std::size_t i = 0; i < hypotheses.size(); ++i) {
    stats += chrf_segment_stats(hypotheses[i], references[i], cfg.max_n);
  }
  return chrf_from_stats(stats, cfg);
}

nlohmann::json to_json(const BleuScore& s) {
  return {{"metric", "bleu"},
          {"score", s.score},
          {"precisions", s.precisions},
          {"brevity_penalty", s.brevity_penalty},
          {"hyp_length", s.hyp_length},
          {"ref_length", s.ref_length}};
}

nlohmann::json to_json(const ChrfScore& s) {
  return {{"metric", "chrf"},
          {"score", s.score},
          {"beta", s.beta},
          {"max_n", s.max_n},
          {"per_order_precision", s.per_order_precision},
          {"per_order_recall", s.per_order_recall},
          {"per_order_f", s.per_order_f},
          {"effective_orders", s.effective_orders}};
}

std::string render(const BleuScore& s) { return "BLEU = " + detail::format_fixed(s.score, 2); }

std::string render(const ChrfScore& s) { return "chrF = " + detail::format_fixed(s.score, 2); }

}  // namespace geez
