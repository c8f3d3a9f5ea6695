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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "geez/corpus.h"
#include "geez/metrics.h"
#include "geez/report.h"
#include "geez/script_norm.h"
#include "geez/stats_sig.h"
#include "geez/subword.h"
#include "geez/utf8.h"
#include "test_util.h"

namespace {

using Lines = std::vector<std::string>;
using Clock = std::chrono::steady_clock;

// Each check returns an empty string on success, otherwise what went wrong.
struct Criterion {
  const char* name;
  std::function<std::string()> check;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", v);
  return buf;
}

bool near(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string metric_identity() {
  const auto lines = geez::testing::read_lines(geez::testing::fixture("mixed50.txt"));
  if (lines.size() != 50) return "fixture has " + std::to_string(lines.size()) + " lines";
  const auto start = Clock::now();
  const double bleu = geez::corpus_bleu(lines, lines).score;
  const double chrf = geez::corpus_chrf(lines, lines).score;
  const double elapsed = seconds_since(start);
  if (!near(bleu, 100.0, 1e-9)) return "BLEU " + fmt(bleu);
  if (!near(chrf, 100.0, 1e-9)) return "chrF " + fmt(chrf);
  if (elapsed >= 1.0) return "took " + fmt(elapsed) + " s";
  return {};
}

std::string bleu_oracle() {
  const auto hyp = geez::testing::read_lines(geez::testing::fixture("bleu_toy.hyp"));
  const auto ref = geez::testing::read_lines(geez::testing::fixture("bleu_toy.ref"));
  const auto s = geez::corpus_bleu(hyp, ref);
  const double expected[] = {0.923076923077, 0.782608695652, 0.6, 0.529411764706};
  for (int n = 0; n < 4; ++n) {
    if (!near(s.precisions[n], expected[n], 1e-6)) return "p" + std::to_string(n + 1) + " " + fmt(s.precisions[n]);
  }
  if (!near(s.brevity_penalty, 0.680712398323, 1e-6)) return "BP " + fmt(s.brevity_penalty);
  if (!near(s.score, 47.113515461111, 1e-6)) return "score " + fmt(s.score);
  return {};
}

std::string chrf_case(const Lines& hyp, const Lines& ref, const std::vector<double>& p,
                      const std::vector<double>& r, const std::vector<double>& f, double score) {
  const auto s = geez::corpus_chrf(hyp, ref);
  // Precision and recall are optional; F is always checked.
  for (std::size_t n = 0; n < f.size(); ++n) {
    if ((!p.empty() && !near(s.per_order_precision[n], p[n], 1e-6)) ||
        (!r.empty() && !near(s.per_order_recall[n], r[n], 1e-6)) ||
        !near(s.per_order_f[n], f[n], 1e-6)) {
      return "order " + std::to_string(n + 1) + " of \"" + hyp[0] + "\"";
    }
  }
  if (!near(s.score, score, 1e-6)) return "score " + fmt(s.score) + " for \"" + hyp[0] + "\"";
  return {};
}

std::string chrf_oracle() {
  std::string err = chrf_case({"ab"}, {"abc"}, {1, 1, 0}, {0.666666666667, 0.5, 0},
                              {0.714285714286, 0.555555555556, 0}, 42.328042328042);
  if (!err.empty()) return err;
  err = chrf_case({"the cat sat", "ሰላም"}, {"the cats sat", "ሰላም ዓለም"},
                  {1, 1, 0.875, 0.666666666667, 0.6, 0.5},
                  {0.75, 0.714285714286, 0.583333333333, 0.4, 0.375, 0.333333333333},
                  {0.789473684211, 0.757575757576, 0.625, 0.434782608696, 0.405405405405,
                   0.357142857143},
                  56.156338550503);
  if (!err.empty()) return err;
  return chrf_case({"ኣየር እዩ"}, {"ኣየር ኣብ"}, {}, {}, {0.6, 0.5, 0.333333333333, 0, 0},
                   28.666666666667);
}

std::string bonferroni_fixture() {
  const double a = geez::bonferroni(0.05, 10);
  if (a != 0.005) return "got " + fmt(a);
  return {};
}

std::string tokenizer_round_trip() {
  const auto norm = geez::load_normalization_config(GEEZ_DEFAULT_NORM);
  Lines corpus;
  for (const auto& p : geez::read_tsv(geez::testing::fixture("climate4.tsv"))) {
    corpus.push_back(p.target_text);
  }
  geez::BpeTrainConfig cfg;
  cfg.vocab_size = 200;
  const auto model = geez::train_bpe(corpus, cfg, norm);
  for (const auto& line : corpus) {
    if (geez::decode(model, geez::encode(model, line)) != geez::normalize(line, norm)) {
      return "training line differs: " + line;
    }
  }
  std::set<char32_t> seen;
  for (const auto& line : corpus) {
    for (char32_t c : geez::utf8::decode(geez::normalize(line, norm))) seen.insert(c);
  }
  seen.insert(U' ');
  const std::u32string alphabet(seen.begin(), seen.end());
  for (const auto& s : geez::testing::random_strings(alphabet, 1000, 24, 2026)) {
    if (geez::decode(model, geez::encode(model, s)) != geez::normalize(s, norm)) {
      return "random string differs: \"" + s + "\"";
    }
  }
  const double oov = geez::oov_rate(model, corpus);
  if (oov != 0.0) return "training OOV rate " + fmt(oov);
  return {};
}

std::string bpe_determinism() {
  const Lines corpus = {"ababab"};
  geez::BpeTrainConfig cfg;
  cfg.vocab_size = 4 + 3 + 2;  // specials, {▁, a, b}, two merges
  const auto a = geez::train_bpe(corpus, cfg, {});
  const auto b = geez::train_bpe(corpus, cfg, {});
  const std::vector<geez::MergePair> expected = {{"a", "b"}, {"ab", "ab"}};
  if (a.merges() != expected) return "unexpected merges";
  if (geez::serialize_model(a) != geez::serialize_model(b)) return "serializations differ";
  return {};
}

std::string cleaning_partition() {
  const auto pairs = geez::read_tsv(geez::testing::fixture("clean20.tsv"));
  const auto first = geez::clean(pairs, geez::FilterConfig{}, {});
  const auto& r = first.report;
  if (r.removed_ids != std::vector<std::size_t>{5, 6, 7}) return "removed the wrong pairs";
  if (r.kept_count + r.removed_count != 20 || first.kept.size() != 17) return "counts do not add up";
  const auto second = geez::clean(first.kept, geez::FilterConfig{}, {});
  if (second.report.removed_count != 0) return "second pass removed pairs";
  return {};
}

std::string split_reproducibility() {
  std::vector<geez::SentencePair> pairs;
  for (std::size_t i = 0; i < 10; ++i) pairs.push_back({i, "s" + std::to_string(i), "t", {}});
  auto ids = [](const std::vector<geez::SentencePair>& part) {
    std::vector<std::size_t> out;
    for (const auto& p : part) out.push_back(p.id);
    return out;
  };
  const auto a = geez::split(pairs, {0.8, 0.1, 0.1}, 42);
  if (a.train.size() != 8 || a.valid.size() != 1 || a.test.size() != 1) return "wrong sizes";
  for (int run = 0; run < 3; ++run) {
    const auto b = geez::split(pairs, {0.8, 0.1, 0.1}, 42);
    if (ids(a.train) != ids(b.train) || ids(a.valid) != ids(b.valid) || ids(a.test) != ids(b.test)) {
      return "membership changed between runs";
    }
  }
  // Reference shuffle from tests/oracles/split_oracle.py.
  if (ids(a.train) != std::vector<std::size_t>{0, 9, 5, 8, 6, 4, 7, 2} ||
      ids(a.valid) != std::vector<std::size_t>{1} || ids(a.test) != std::vector<std::size_t>{3}) {
    return "membership differs from the reference shuffle";
  }
  return {};
}

std::string report_fixture() {
  const auto entries = geez::load_entries(geez::testing::fixture("ablation_entries.json"));
  const std::string tsv = geez::build_table(entries, geez::TableFormat::kTsv);
  const char* cells[] = {"\t19.00\t10.49\n", "\t17.00\t9.39\n", "\t18.00\t16.20\n",
                         "\t21.00\t19.50\n", "\t91.00\t–\n",    "\t89.00\t–\n"};
  std::size_t pos = 0;
  for (const char* cell : cells) {
    pos = tsv.find(cell, pos);
    if (pos == std::string::npos) return std::string("missing cells") + cell;
  }
  const auto t3 = geez::load_entries(geez::testing::fixture("baseline_entries.json"));
  const auto report = geez::compare(geez::entries_for_system(t3, "MarianMT"),
                                    geez::entries_for_system(t3, "ours"));
  bool bleu = false, chrf = false;
  for (const auto& row : report.rows) {
    if (row.metric == geez::Metric::kBleu) bleu = near(row.delta, 7.8, 1e-9);
    if (row.metric == geez::Metric::kChrf) chrf = near(row.delta, 11.44, 1e-9);
  }
  if (!bleu || !chrf) return "comparison deltas wrong";
  return {};
}

std::string significance_sanity() {
  const auto ref = geez::testing::read_lines(geez::testing::fixture("sig100.ref"));
  const auto hyp_a = geez::testing::read_lines(geez::testing::fixture("sig100.hyp_a"));
  const auto hyp_b = geez::testing::read_lines(geez::testing::fixture("sig100.hyp_b"));
  for (double alpha : {0.001, 0.05, 0.5, 0.99}) {
    const auto same = geez::paired_bootstrap(hyp_a, hyp_a, ref, geez::Metric::kBleu, 200, 42, alpha);
    if (same.p_value != 1.0 || same.significant) return "identical systems: p " + fmt(same.p_value);
  }
  for (geez::Metric metric : {geez::Metric::kBleu, geez::Metric::kChrf}) {
    const auto start = Clock::now();
    const auto r = geez::paired_bootstrap(hyp_a, hyp_b, ref, metric, 1000, 42);
    const double elapsed = seconds_since(start);
    if (r.p_value > 2.0 / 1000) return "disjoint system: p " + fmt(r.p_value);
    if (elapsed >= 10.0) return "took " + fmt(elapsed) + " s";
  }
  return {};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"metric identity on 50 mixed sentences", metric_identity},
      {"BLEU matches oracle on toy corpus", bleu_oracle},
      {"chrF matches oracle on three fixtures", chrf_oracle},
      {"Bonferroni (0.05, 10) = 0.005", bonferroni_fixture},
      {"tokenizer round trip and zero training OOV", tokenizer_round_trip},
      {"BPE determinism and ababab oracle", bpe_determinism},
      {"cleaning partition on 20-pair fixture", cleaning_partition},
      {"split reproducibility (8, 1, 1)", split_reproducibility},
      {"report table and comparison deltas", report_fixture},
      {"paired bootstrap sanity", significance_sanity},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    std::string err;
    try {
      err = criteria[i].check();
    } catch (const std::exception& e) {
      err = std::string("threw: ") + e.what();
    }
    std::printf("[%s] %zu. %s%s%s\n", err.empty() ? "PASS" : "FAIL", i + 1, criteria[i].name,
                err.empty() ? "" : " -- ", err.c_str());
    if (!err.empty()) ++failed;
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
