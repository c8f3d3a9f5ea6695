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
#include <span>
#include <string>
#include <vector>

#include "geez/metrics.h"
#include "json.hpp"

namespace geez {

struct SignificanceResult {
  std::string metric_name;
  double score_a = 0.0;
  double score_b = 0.0;
  double delta = 0.0;  // score_b - score_a
  double p_value = 1.0;
  std::size_t n_resamples = 0;
  uint64_t seed = 0;
  double alpha = 0.05;
  double adjusted_alpha = 0.05;
  bool significant = false;  // p_value < adjusted_alpha
};

// alpha / m. Throws ConfigError unless 0 < alpha < 1 and m >= 1.
double bonferroni(double alpha, int64_t m);

inline constexpr std::size_t kDefaultResamples = 1000;
inline constexpr uint64_t kDefaultSeed = 42;

// Paired bootstrap over segment indices. Index sets are drawn from
// SplitMix64(seed), n indices per resample via rng.index(n); the two-sided
// p-value is min(1, 2 * min(P[delta <= 0], P[delta >= 0])). The result is
// uncorrected: adjusted_alpha == alpha until apply_correction runs.
SignificanceResult paired_bootstrap(std::span<const std::string> hyp_a,
                                    std::span<const std::string> hyp_b,
                                    std::span<const std::string> refs, Metric metric,
                                    std::size_t n_resamples = kDefaultResamples,
                                    uint64_t seed = kDefaultSeed, double alpha = 0.05);

// Treats `results` as one correction family of size results.size().
std::vector<SignificanceResult> apply_correction(std::vector<SignificanceResult> results,
                                                 double alpha);

nlohmann::json to_json(const SignificanceResult& r);

// One line per result; significant ones are marked with "*".
std::string render(std::span<const SignificanceResult> results);

}  // namespace geez
