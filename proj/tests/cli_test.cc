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

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "test_util.h"

namespace {

namespace fs = std::filesystem;
using geez::testing::fixture;
using geez::testing::slurp;

struct Run {
  int code = -1;
  std::string out;
};

// Runs the CLI through the shell; stderr is discarded.
Run Cli(const std::string& args, const std::string& stdin_text = "") {
  const fs::path input = fs::temp_directory_path() / "geez_cli_test_stdin.txt";
  std::ofstream(input, std::ios::binary) << stdin_text;
  const std::string cmd =
      std::string("'") + GEEZ_FORGE_BIN + "' " + args + " < '" + input.string() + "' 2>/dev/null";
  Run run;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return run;
  std::array<char, 4096> buf;
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) run.out.append(buf.data(), n);
  const int status = pclose(pipe);
  run.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return run;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("geez_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string Path(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

TEST_F(CliTest, Version) {
  const auto r = Cli("--version");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("geez-forge 0.1.0"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("model format 1"), std::string::npos) << r.out;
}

TEST_F(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(Cli("").code, 1);
  EXPECT_EQ(Cli("frobnicate").code, 1);
  EXPECT_EQ(Cli("score bleu --hyp x").code, 1);
  EXPECT_EQ(Cli("significance --hyp-a " + fixture("sig100.hyp_a") + " --hyp-b " +
                fixture("sig100.hyp_b") + " --ref " + fixture("sig100.ref") + " --family-size 0")
                .code,
            1);
}

TEST_F(CliTest, MissingFileExitsThree) {
  EXPECT_EQ(Cli("score bleu --hyp /nonexistent/h --ref /nonexistent/r").code, 3);
  EXPECT_EQ(Cli("corpus stats --in /nonexistent/c.tsv").code, 3);
}

TEST_F(CliTest, BadDataExitsTwo) {
  std::ofstream(Path("bad.tsv")) << "one column only\n";
  EXPECT_EQ(Cli("corpus stats --in " + Path("bad.tsv")).code, 2);
  std::ofstream(Path("one.txt")) << "a\n";
  EXPECT_EQ(Cli("score chrf --hyp " + Path("one.txt") + " --ref " + fixture("bleu_toy.ref")).code, 2);
}

TEST_F(CliTest, ScoreBleuAndChrf) {
  const auto bleu = Cli("score bleu --hyp " + fixture("bleu_toy.hyp") + " --ref " +
                        fixture("bleu_toy.ref"));
  EXPECT_EQ(bleu.code, 0);
  EXPECT_EQ(bleu.out, "BLEU = 47.11\n");

  const auto chrf = Cli("score chrf --hyp " + fixture("mixed50.txt") + " --ref " +
                        fixture("mixed50.txt"));
  EXPECT_EQ(chrf.code, 0);
  EXPECT_EQ(chrf.out, "chrF = 100.00\n");

  const auto j = nlohmann::json::parse(Cli("score bleu --json --hyp " + fixture("bleu_toy.hyp") +
                                           " --ref " + fixture("bleu_toy.ref"))
                                           .out);
  EXPECT_NEAR(j["score"].get<double>(), 47.113515461111, 1e-9);
}

TEST_F(CliTest, SignificanceFamily) {
  const std::string args = "significance --hyp-a " + fixture("sig100.hyp_a") + " --hyp-b " +
                           fixture("sig100.hyp_b") + " --ref " + fixture("sig100.ref") +
                           " --family-size 10";
  const auto text = Cli(args);
  EXPECT_EQ(text.code, 0);
  EXPECT_NE(text.out.find("0.005"), std::string::npos) << text.out;
  const auto j = nlohmann::json::parse(Cli(args + " --json").out);
  const auto& r = j.is_array() ? j[0] : j;
  EXPECT_DOUBLE_EQ(r["adjusted_alpha"].get<double>(), 0.005);
  EXPECT_TRUE(r["significant"].get<bool>());
  EXPECT_DOUBLE_EQ(r["score_a"].get<double>(), 0.0);
}

TEST_F(CliTest, CorpusCleanLeavesInputUntouched) {
  const std::string in = fixture("clean20.tsv");
  const std::string before = slurp(in);
  const auto r = Cli("corpus clean --in " + in + " --out " + Path("kept.tsv") + " --report " +
                     Path("report.json"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(slurp(in), before);
  const auto report = nlohmann::json::parse(slurp(Path("report.json")));
  EXPECT_EQ(report["removed_count"], 3);
  EXPECT_EQ(report["per_filter_counts"]["non_empty"], 1);
  EXPECT_EQ(geez::testing::read_lines(Path("kept.tsv")).size(), 17u);
}

TEST_F(CliTest, CorpusSplitAndStats) {
  const auto r = Cli("corpus split --in " + fixture("clean20.tsv") + " --ratios 0.8,0.1,0.1 --seed 3 "
                     "--out-prefix " + Path("c"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(geez::testing::read_lines(Path("c.train.tsv")).size(), 16u);
  EXPECT_EQ(geez::testing::read_lines(Path("c.valid.tsv")).size(), 2u);
  EXPECT_EQ(geez::testing::read_lines(Path("c.test.tsv")).size(), 2u);
  EXPECT_EQ(Cli("corpus split --in " + fixture("clean20.tsv") + " --ratios 0.5,0.5,0.5 --out-prefix " +
                Path("d"))
                .code,
            1);

  const auto stats = Cli("corpus stats --format tsv --in " + fixture("climate4.tsv"));
  EXPECT_EQ(stats.code, 0);
  EXPECT_NE(stats.out.find("Education\t–\t4\t13.0 / 12.3\t"), std::string::npos) << stats.out;
}

TEST_F(CliTest, NormalizeStdin) {
  const auto r = Cli("normalize", "  ፀሓይ \t ዓዲ  \n");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "ጸሃይ ኣዲ\n");
  const auto identity = Cli("normalize --config " + Path("missing.json"), "x\n");
  EXPECT_EQ(identity.code, 3);
}

TEST_F(CliTest, TokenizerRoundTrip) {
  std::ofstream(Path("train.txt")) << "ሰላም ዓለም\nሰላም ኣብ ዓለም\n";
  EXPECT_EQ(Cli("tokenizer train --corpus " + Path("train.txt") + " --vocab-size 40 --out " +
                Path("model.json"))
                .code,
            0);
  const auto ids = Cli("tokenizer encode --ids --model " + Path("model.json"), "ሰላም ዓለም\n");
  EXPECT_EQ(ids.code, 0);
  const auto text = Cli("tokenizer decode --ids --model " + Path("model.json"), ids.out);
  EXPECT_EQ(text.code, 0);
  // The bundled table folds ዓ into ኣ.
  EXPECT_EQ(text.out, "ሰላም ኣለም\n");

  const auto pieces = Cli("tokenizer encode --model " + Path("model.json"), "ሰላም ዓለም\n");
  EXPECT_EQ(Cli("tokenizer decode --model " + Path("model.json"), pieces.out).out, "ሰላም ኣለም\n");
  EXPECT_EQ(Cli("tokenizer decode --ids --model " + Path("model.json"), "99999\n").code, 2);
}

TEST_F(CliTest, ReportTableAndCompare) {
  const auto table = Cli("report table --format tsv --in " + fixture("ablation_entries.json"));
  EXPECT_EQ(table.code, 0);
  EXPECT_NE(table.out.find("Human\ten_to_ti\tin-domain\t91.00\t–"), std::string::npos) << table.out;

  const auto cmp = Cli("report compare --format tsv --in " + fixture("baseline_entries.json") +
                       " --baseline MarianMT --candidate ours");
  EXPECT_EQ(cmp.code, 0);
  EXPECT_NE(cmp.out.find("+11.44"), std::string::npos) << cmp.out;
  EXPECT_NE(cmp.out.find("+7.80"), std::string::npos) << cmp.out;
}

}  // namespace
