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

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace geez {

enum class Metric { kBleu, kChrf };

std::string_view to_string(Metric m);
std::optional<Metric> parse_metric(std::string_view name);

inline constexpr int kBleuMaxOrder = 4;

// Integer sufficient statistics; corpus statistics are the sum of segment
// statistics, so resampled corpora never need re-tokenizing.
struct BleuStats {
  std::array<int64_t, kBleuMaxOrder> matches{};
  std::array<int64_t, kBleuMaxOrder> hyp_ngrams{};
  std::array<int64_t, kBleuMaxOrder> ref_ngrams{};
  int64_t hyp_length = 0;
  int64_t ref_length = 0;

  BleuStats& operator+=(const BleuStats& other);
};

struct BleuScore {
  double score = 0.0;
  std::array<double, kBleuMaxOrder> precisions{};  // after smoothing
  double brevity_penalty = 1.0;
  int64_t hyp_length = 0;
  int64_t ref_length = 0;
};

// Whitespace split after detaching every Unicode punctuation character
// (general category P*, Ethiopic marks included) as its own token.
std::vector<std::string> bleu_tokenize(std::string_view text);

BleuStats bleu_segment_stats(std::string_view hypothesis, std::string_view reference);

// Precision rules, per order n:
//  - no hypothesis n-grams: 1 if the reference has none either, else 1/2;
//  - zero matches while unigram matches exist (n >= 2): 1 / (2 * hyp n-grams);
//  - otherwise matches / hyp n-grams.
// Zero unigram matches give BLEU 0. An empty hypothesis side scores 0 with
// brevity penalty 0, unless the references are empty too (score 100).
BleuScore bleu_from_stats(const BleuStats& stats);

BleuScore corpus_bleu(std::span<const std::string> hypotheses,
                      std::span<const std::string> references);

struct ChrfConfig {
  double beta = 2.0;
  int max_n = 6;
};

struct ChrfStats {
  std::vector<int64_t> matches;
  std::vector<int64_t> hyp_ngrams;
  std::vector<int64_t> ref_ngrams;

  ChrfStats& operator+=(const ChrfStats& other);
};

struct ChrfScore {
  double score = 0.0;
  double beta = 2.0;
  int max_n = 6;
  std::vector<double> per_order_precision;
  std::vector<double> per_order_recall;
  std::vector<double> per_order_f;
  int effective_orders = 0;  // orders with any n-gram on either side
};

ChrfStats chrf_segment_stats(std::string_view hypothesis, std::string_view reference, int max_n);

ChrfScore chrf_from_stats(const ChrfStats& stats, const ChrfConfig& cfg);

ChrfScore corpus_chrf(std::span<const std::string> hypotheses,
                      std::span<const std::string> references, const ChrfConfig& cfg = {});

nlohmann::json to_json(const BleuScore& s);
nlohmann::json to_json(const ChrfScore& s);

// "BLEU = 47.11" / "chrF = 42.33".
std::string render(const BleuScore& s);
std::string render(const ChrfScore& s);

}  // namespace geez
