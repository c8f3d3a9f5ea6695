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

#include "geez/stats_sig.h"

#include <algorithm>

#include "geez/error.h"
#include "geez/prng.h"
#include "text_table.h"

namespace geez {
namespace {

template <typename Stats, typename Score>
double resampled_score(const std::vector<Stats>& segments, const std::vector<std::size_t>& idx,
                       Score&& score) {
  Stats sum{};
  for (std::size_t i : idx) sum += segments[i];
  return score(sum);
}

}  // namespace

double bonferroni(double alpha, int64_t m) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie strictly between 0 and 1");
  if (m < 1) throw ConfigError("the number of tests must be at least 1");
  return alpha / static_cast<double>(m);
}

SignificanceResult paired_bootstrap(std::span<const std::string> hyp_a,
                                    std::span<const std::string> hyp_b,
                                    std::span<const std::string> refs, Metric metric,
                                    std::size_t n_resamples, uint64_t seed, double alpha) {
  if (hyp_a.empty() || hyp_b.empty() || refs.empty()) {
    throw DataError("paired bootstrap needs non-empty inputs");
  }
  if (hyp_a.size() != refs.size() || hyp_b.size() != refs.size()) {
    throw DataError("length mismatch between system outputs and references");
  }
  if (refs.size() < 2) throw DataError("paired bootstrap needs at least two segments");
  if (n_resamples < 1) throw ConfigError("n_resamples must be at least 1");
  const double adjusted = bonferroni(alpha, 1);

  const std::size_t n = refs.size();
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;

  // Index sets come first, from one sequential stream.
  SplitMix64 rng(seed);
  std::vector<std::vector<std::size_t>> samples(n_resamples, std::vector<std::size_t>(n));
  for (auto& sample : samples) {
    for (auto& i : sample) i = rng.index(n);
  }

  std::vector<double> deltas;
  deltas.reserve(n_resamples);
  double score_a = 0.0;
  double score_b = 0.0;
  if (metric == Metric::kBleu) {
    std::vector<BleuStats> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = bleu_segment_stats(hyp_a[i], refs[i]);
      b[i] = bleu_segment_stats(hyp_b[i], refs[i]);
    }
    auto score = [](const BleuStats& s) { return bleu_from_stats(s).score; };
    score_a = resampled_score(a, all, score);
    score_b = resampled_score(b, all, score);
    for (const auto& sample : samples) {
      deltas.push_back(resampled_score(b, sample, score) - resampled_score(a, sample, score));
    }
  } else {
    const ChrfConfig cfg;
    std::vector<ChrfStats> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = chrf_segment_stats(hyp_a[i], refs[i], cfg.max_n);
      b[i] = chrf_segment_stats(hyp_b[i], refs[i], cfg.max_n);
    }
    auto score = [&cfg](const ChrfStats& s) { return chrf_from_stats(s, cfg).score; };
    score_a = resampled_score(a, all, score);
    score_b = resampled_score(b, all, score);
    for (const auto& sample : samples) {
      deltas.push_back(resampled_score(b, sample, score) - resampled_score(a, sample, score));
    }
  }

  const auto total = static_cast<double>(n_resamples);
  const auto at_most_zero = static_cast<double>(
      std::count_if(deltas.begin(), deltas.end(), [](double d) { return d <= 0.0; }));
  const auto at_least_zero = static_cast<double>(
      std::count_if(deltas.begin(), deltas.end(), [](double d) { return d >= 0.0; }));

  SignificanceResult r;
  r.metric_name = std::string(to_string(metric));
  r.score_a = score_a;
  r.score_b = score_b;
  r.delta = score_b - score_a;
  r.p_value = std::min(1.0, 2.0 * std::min(at_most_zero / total, at_least_zero / total));
  r.n_resamples = n_resamples;
  r.seed = seed;
  r.alpha = alpha;
  r.adjusted_alpha = adjusted;
  r.significant = r.p_value < r.adjusted_alpha;
  return r;
}

std::vector<SignificanceResult> apply_correction(std::vector<SignificanceResult> results,
                                                 double alpha) {
  if (results.empty()) throw DataError("cannot correct an empty family of results");
  const double adjusted = bonferroni(alpha, static_cast<int64_t>(results.size()));
  for (auto& r : results) {
    r.alpha = alpha;
    r.adjusted_alpha = adjusted;
    r.significant = r.p_value < adjusted;
  }
  return results;
}

nlohmann::json to_json(const SignificanceResult& r) {
  return {{"metric_name", r.metric_name}, {"score_a", r.score_a},
          {"score_b", r.score_b},         {"delta", r.delta},
          {"p_value", r.p_value},         {"n_resamples", r.n_resamples},
          {"seed", r.seed},               {"alpha", r.alpha},
          {"adjusted_alpha", r.adjusted_alpha}, {"significant", r.significant}};
}

std::string render(std::span<const SignificanceResult> results) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"metric", "score_a", "score_b", "delta", "p_value", "adjusted_alpha",
                  "resamples", "seed", ""});
  for (const auto& r : results) {
    std::string delta = detail::format_fixed(r.delta, 2);
    if (r.delta >= 0.0) delta.insert(0, "+");
    rows.push_back({r.metric_name, detail::format_fixed(r.score_a, 2),
                    detail::format_fixed(r.score_b, 2), delta, detail::format_fixed(r.p_value, 4),
                    nlohmann::json(r.adjusted_alpha).dump(), std::to_string(r.n_resamples),
                    std::to_string(r.seed), r.significant ? "*" : ""});
  }
  return detail::render_text_table(rows);
}

}  // namespace geez
