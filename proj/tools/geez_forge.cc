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

// geez-forge: command-line frontend over the geez library.
//
// Exit codes: 0 success, 1 usage/config error, 2 data/validation error,
// 3 I/O error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "geez/corpus.h"
#include "geez/error.h"
#include "geez/metrics.h"
#include "geez/report.h"
#include "geez/script_norm.h"
#include "geez/stats_sig.h"
#include "geez/subword.h"
#include "geez/utf8.h"
#include "json.hpp"

#ifndef GEEZ_FORGE_VERSION
#define GEEZ_FORGE_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitIo = 3;

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw geez::IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> split_lines(const std::string& text, const std::string& name) {
  if (const auto at = geez::utf8::find_invalid(text); at != std::string::npos) {
    throw geez::DataError(name + ": invalid UTF-8 at byte offset " + std::to_string(at));
  }
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.ends_with('\r')) line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

std::vector<std::string> read_lines(const fs::path& path) {
  return split_lines(read_text(path), path.string());
}

std::vector<std::string> read_stdin_lines() {
  std::ostringstream buf;
  buf << std::cin.rdbuf();
  return split_lines(buf.str(), "<stdin>");
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw geez::IoError("cannot write " + path.string());
  out << text;
  if (!out) throw geez::IoError("failed writing " + path.string());
}

// --config, then $GEEZ_FORGE_CONFIG, then the bundled Ge'ez table, then the
// identity configuration.
geez::NormalizationConfig resolve_norm(const std::string& explicit_path) {
  if (!explicit_path.empty()) return geez::load_normalization_config(explicit_path);
  if (const char* env = std::getenv("GEEZ_FORGE_CONFIG"); env && *env) {
    return geez::load_normalization_config(env);
  }
#ifdef GEEZ_FORGE_DEFAULT_CONFIG
  if (fs::exists(GEEZ_FORGE_DEFAULT_CONFIG)) {
    return geez::load_normalization_config(GEEZ_FORGE_DEFAULT_CONFIG);
  }
#endif
  return {};
}

std::vector<geez::SentencePair> read_corpus(const std::string& in, const std::string& format) {
  if (format == "moses") return geez::read_moses(in + ".en", in + ".ti");
  return geez::read_tsv(in);
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return kExitOk;
  } catch (const geez::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const geez::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const geez::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}

geez::ManifestFormat manifest_format(const std::string& name) {
  if (name == "tsv") return geez::ManifestFormat::kTsv;
  if (name == "json") return geez::ManifestFormat::kJson;
  return geez::ManifestFormat::kText;
}

geez::TableFormat table_format(const std::string& name) {
  if (name == "tsv") return geez::TableFormat::kTsv;
  if (name == "json") return geez::TableFormat::kJson;
  return geez::TableFormat::kText;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Corpus engineering and evaluation toolkit for Ge'ez-script machine translation"};
  app.set_version_flag("--version", std::string("geez-forge ") + GEEZ_FORGE_VERSION +
                                        " (model format " +
                                        std::string(geez::kModelFormatVersion) + ")");
  app.require_subcommand(1);

  int exit_code = kExitOk;
  auto run = [&exit_code](auto&& fn) { exit_code = guarded(fn); };

  // normalize
  auto* norm_cmd = app.add_subcommand("normalize", "Normalize text files (stdout unless --in-place)");
  std::string norm_config;
  bool in_place = false;
  std::vector<std::string> norm_files;
  norm_cmd->add_option("--config", norm_config, "Normalization config JSON");
  norm_cmd->add_flag("--in-place", in_place, "Rewrite the input files");
  norm_cmd->add_option("files", norm_files, "Input files (stdin when absent)");
  norm_cmd->callback([&] {
    run([&] {
      const geez::Normalizer normalizer(resolve_norm(norm_config));
      if (norm_files.empty()) {
        if (in_place) throw geez::ConfigError("--in-place needs at least one file");
        for (const auto& line : read_stdin_lines()) std::cout << normalizer(line) << "\n";
        return;
      }
      for (const auto& file : norm_files) {
        std::string out;
        for (const auto& line : read_lines(file)) out += normalizer(line) + "\n";
        if (in_place) {
          const fs::path tmp = file + ".tmp";
          write_text(tmp, out);
          fs::rename(tmp, file);
        } else {
          std::cout << out;
        }
      }
    });
  });

  // tokenizer
  auto* tok_cmd = app.add_subcommand("tokenizer", "Train and apply the BPE tokenizer");
  tok_cmd->require_subcommand(1);

  auto* train_cmd = tok_cmd->add_subcommand("train", "Train a BPE model");
  std::string train_corpus, train_out, train_affixes, train_config;
  geez::BpeTrainConfig train_cfg;
  train_cmd->add_option("--corpus", train_corpus, "Training text, one segment per line")->required();
  train_cmd->add_option("--vocab-size", train_cfg.vocab_size, "Target vocabulary size")
      ->capture_default_str();
  train_cmd->add_option("--min-frequency", train_cfg.min_pair_frequency, "Minimum pair count")
      ->capture_default_str();
  train_cmd->add_option("--seed", train_cfg.seed, "Recorded in run metadata")->capture_default_str();
  train_cmd->add_option("--affixes", train_affixes, "Protected affix list JSON");
  train_cmd->add_option("--config", train_config, "Normalization config JSON");
  train_cmd->add_option("--out", train_out, "Model output path")->required();
  train_cmd->callback([&] {
    run([&] {
      const auto corpus = read_lines(train_corpus);
      std::vector<geez::Affix> affixes;
      if (!train_affixes.empty()) affixes = geez::load_affixes(train_affixes);
      const auto model = geez::train_bpe(corpus, train_cfg, resolve_norm(train_config), affixes);
      geez::save_model(model, train_out);
      const nlohmann::json meta = {{"vocab_size", model.vocab().size()},
                                   {"merges", model.merges().size()},
                                   {"seed", train_cfg.seed},
                                   {"model", train_out}};
      std::cout << meta.dump() << "\n";
    });
  });

  std::string model_path;
  bool use_ids = false;
  bool use_pieces = false;
  auto add_model_options = [&](CLI::App* cmd) {
    cmd->add_option("--model", model_path, "Model JSON")->required();
    auto* ids = cmd->add_flag("--ids", use_ids, "Token ids");
    auto* pieces = cmd->add_flag("--pieces", use_pieces, "Surface pieces (default)");
    ids->excludes(pieces);
  };
  auto* encode_cmd = tok_cmd->add_subcommand("encode", "stdin text -> tokens, one line each");
  add_model_options(encode_cmd);
  encode_cmd->callback([&] {
    run([&] {
      const auto model = geez::load_model(model_path);
      for (const auto& line : read_stdin_lines()) {
        const auto seq = geez::encode(model, line);
        std::string out;
        for (std::size_t i = 0; i < seq.ids.size(); ++i) {
          if (i) out.push_back(' ');
          out += use_ids ? std::to_string(seq.ids[i]) : seq.pieces[i];
        }
        std::cout << out << "\n";
      }
    });
  });
  auto* decode_cmd = tok_cmd->add_subcommand("decode", "stdin tokens -> text, one line each");
  add_model_options(decode_cmd);
  decode_cmd->callback([&] {
    run([&] {
      const auto model = geez::load_model(model_path);
      for (const auto& line : read_stdin_lines()) {
        std::vector<std::string> fields = geez::split_whitespace(line);
        if (!use_ids) {
          std::cout << geez::detokenize_pieces(fields) << "\n";
          continue;
        }
        std::vector<int32_t> ids;
        for (const auto& f : fields) {
          try {
            std::size_t used = 0;
            const long long v = std::stoll(f, &used);
            if (used != f.size()) throw std::invalid_argument(f);
            ids.push_back(static_cast<int32_t>(v));
          } catch (const std::exception&) {
            throw geez::DataError("not a token id: \"" + f + "\"");
          }
        }
        std::cout << geez::decode(model, ids) << "\n";
      }
    });
  });

  // corpus
  auto* corpus_cmd = app.add_subcommand("corpus", "Parallel corpus tools");
  corpus_cmd->require_subcommand(1);
  std::string corpus_in, input_format = "tsv";
  auto add_input = [&](CLI::App* cmd) {
    cmd->add_option("--in", corpus_in, "TSV file, or Moses prefix (<p>.en/<p>.ti)")->required();
    cmd->add_option("--input-format", input_format, "tsv or moses")
        ->check(CLI::IsMember({"tsv", "moses"}))
        ->capture_default_str();
  };

  auto* clean_cmd = corpus_cmd->add_subcommand("clean", "Normalize and filter sentence pairs");
  std::string filter_config, clean_norm, clean_out, clean_report;
  add_input(clean_cmd);
  clean_cmd->add_option("--config", filter_config, "Filter config JSON");
  clean_cmd->add_option("--norm", clean_norm, "Normalization config JSON");
  clean_cmd->add_option("--out", clean_out, "Kept pairs (TSV)")->required();
  clean_cmd->add_option("--report", clean_report, "Cleaning report (JSON)")->required();
  clean_cmd->callback([&] {
    run([&] {
      const geez::FilterConfig cfg =
          filter_config.empty() ? geez::FilterConfig{} : geez::load_filter_config(filter_config);
      const auto pairs = read_corpus(corpus_in, input_format);
      const auto result = geez::clean(pairs, cfg, resolve_norm(clean_norm));
      geez::write_tsv(fs::path(clean_out), result.kept);
      write_text(clean_report, geez::to_json(result.report).dump(2) + "\n");
    });
  });

  auto* split_cmd = corpus_cmd->add_subcommand("split", "Seeded train/valid/test split");
  std::string ratios_text = "0.8,0.1,0.1", out_prefix;
  uint64_t split_seed = 42;
  add_input(split_cmd);
  split_cmd->add_option("--ratios", ratios_text, "train,valid,test")->capture_default_str();
  split_cmd->add_option("--seed", split_seed, "SplitMix64 seed")->capture_default_str();
  split_cmd->add_option("--out-prefix", out_prefix, "Writes <p>.train.tsv, <p>.valid.tsv, <p>.test.tsv")
      ->required();
  split_cmd->callback([&] {
    run([&] {
      std::vector<double> r;
      std::stringstream ss(ratios_text);
      std::string item;
      while (std::getline(ss, item, ',')) {
        try {
          r.push_back(std::stod(item));
        } catch (const std::exception&) {
          throw geez::ConfigError("bad ratio \"" + item + "\"");
        }
      }
      if (r.size() != 3) throw geez::ConfigError("--ratios needs three comma-separated values");
      const auto pairs = read_corpus(corpus_in, input_format);
      const auto parts = geez::split(pairs, {r[0], r[1], r[2]}, split_seed);
      geez::write_tsv(fs::path(out_prefix + ".train.tsv"), parts.train);
      geez::write_tsv(fs::path(out_prefix + ".valid.tsv"), parts.valid);
      geez::write_tsv(fs::path(out_prefix + ".test.tsv"), parts.test);
      const nlohmann::json meta = {
          {"prng", "splitmix64"},
          {"seed", split_seed},
          {"ratios", r},
          {"sizes", {{"train", parts.train.size()}, {"valid", parts.valid.size()},
                     {"test", parts.test.size()}}}};
      std::cout << meta.dump() << "\n";
    });
  });

  auto* stats_cmd = corpus_cmd->add_subcommand("stats", "Per-domain manifest");
  std::string stats_format = "text";
  add_input(stats_cmd);
  stats_cmd->add_option("--format", stats_format, "text, tsv or json")
      ->check(CLI::IsMember({"text", "tsv", "json"}))
      ->capture_default_str();
  stats_cmd->callback([&] {
    run([&] {
      const auto rows = geez::compute_stats(read_corpus(corpus_in, input_format));
      std::cout << geez::render_manifests(rows, manifest_format(stats_format));
    });
  });

  auto* verify_cmd = corpus_cmd->add_subcommand("verify", "Length-ratio and numeral checks per pair");
  std::string verify_config, verify_norm;
  add_input(verify_cmd);
  verify_cmd->add_option("--config", verify_config, "Filter config JSON");
  verify_cmd->add_option("--norm", verify_norm, "Normalization config JSON");
  verify_cmd->callback([&] {
    run([&] {
      const geez::FilterConfig cfg =
          verify_config.empty() ? geez::FilterConfig{} : geez::load_filter_config(verify_config);
      const auto norm = resolve_norm(verify_norm);
      std::size_t suspect = 0;
      for (const auto& pair : read_corpus(corpus_in, input_format)) {
        const auto verdict = geez::verify_alignment(pair, cfg, norm);
        std::cout << pair.id << '\t';
        if (verdict.aligned()) {
          std::cout << "aligned\n";
          continue;
        }
        ++suspect;
        std::cout << "suspect";
        for (const auto& check : verdict.failed_checks) std::cout << '\t' << check;
        std::cout << '\n';
      }
      std::cerr << suspect << " suspect pair(s)\n";
    });
  });

  // score
  auto* score_cmd = app.add_subcommand("score", "Corpus BLEU or chrF");
  score_cmd->require_subcommand(1);
  std::string hyp_path, ref_path;
  bool score_json = false;
  for (const char* name : {"bleu", "chrf"}) {
    auto* cmd = score_cmd->add_subcommand(name, std::string("Corpus ") + name);
    cmd->add_option("--hyp", hyp_path, "Hypotheses, one per line")->required();
    cmd->add_option("--ref", ref_path, "References, one per line")->required();
    cmd->add_flag("--json", score_json, "Emit JSON with all components");
    const bool bleu = std::string(name) == "bleu";
    cmd->callback([&, bleu] {
      run([&] {
        const auto hyps = read_lines(hyp_path);
        const auto refs = read_lines(ref_path);
        if (bleu) {
          const auto s = geez::corpus_bleu(hyps, refs);
          std::cout << (score_json ? geez::to_json(s).dump(2) : geez::render(s)) << "\n";
        } else {
          const auto s = geez::corpus_chrf(hyps, refs);
          std::cout << (score_json ? geez::to_json(s).dump(2) : geez::render(s)) << "\n";
        }
      });
    });
  }

  // significance
  auto* sig_cmd = app.add_subcommand("significance", "Paired bootstrap with Bonferroni correction");
  std::string hyp_a_path, hyp_b_path, sig_ref_path, sig_metric = "bleu";
  std::size_t resamples = geez::kDefaultResamples;
  uint64_t sig_seed = geez::kDefaultSeed;
  double alpha = 0.05;
  int64_t family_size = 1;
  bool sig_json = false;
  sig_cmd->add_option("--hyp-a", hyp_a_path, "System A output")->required();
  sig_cmd->add_option("--hyp-b", hyp_b_path, "System B output")->required();
  sig_cmd->add_option("--ref", sig_ref_path, "References")->required();
  sig_cmd->add_option("--metric", sig_metric, "bleu or chrf")
      ->check(CLI::IsMember({"bleu", "chrf"}))
      ->capture_default_str();
  sig_cmd->add_option("--resamples", resamples, "Bootstrap resamples")->capture_default_str();
  sig_cmd->add_option("--seed", sig_seed, "SplitMix64 seed")->capture_default_str();
  sig_cmd->add_option("--alpha", alpha, "Family-wise significance level")->capture_default_str();
  sig_cmd->add_option("--family-size", family_size, "Number of tests in the family (m)")
      ->capture_default_str();
  sig_cmd->add_flag("--json", sig_json, "Emit JSON");
  sig_cmd->callback([&] {
    run([&] {
      const auto a = read_lines(hyp_a_path);
      const auto b = read_lines(hyp_b_path);
      const auto refs = read_lines(sig_ref_path);
      auto result = geez::paired_bootstrap(a, b, refs, *geez::parse_metric(sig_metric), resamples,
                                           sig_seed, alpha);
      result.adjusted_alpha = geez::bonferroni(alpha, family_size);
      result.significant = result.p_value < result.adjusted_alpha;
      if (sig_json) {
        std::cout << nlohmann::json::array({geez::to_json(result)}).dump(2) << "\n";
      } else {
        const std::vector<geez::SignificanceResult> one = {result};
        std::cout << geez::render(one);
      }
    });
  });

  // report
  auto* report_cmd = app.add_subcommand("report", "Benchmark tables and comparisons");
  report_cmd->require_subcommand(1);
  std::string entries_path, report_format = "text", baseline_label, candidate_label;
  auto add_report_options = [&](CLI::App* cmd) {
    cmd->add_option("--in", entries_path, "Score entries (JSON array or TSV)")->required();
    cmd->add_option("--format", report_format, "text, tsv or json")
        ->check(CLI::IsMember({"text", "tsv", "json"}))
        ->capture_default_str();
  };
  auto* table_cmd = report_cmd->add_subcommand("table", "Render a score table");
  add_report_options(table_cmd);
  table_cmd->callback([&] {
    run([&] {
      std::cout << geez::build_table(geez::load_entries(entries_path), table_format(report_format));
    });
  });
  auto* compare_cmd = report_cmd->add_subcommand("compare", "Baseline vs candidate deltas");
  add_report_options(compare_cmd);
  compare_cmd->add_option("--baseline", baseline_label, "Baseline system label")->required();
  compare_cmd->add_option("--candidate", candidate_label, "Candidate system label")->required();
  compare_cmd->callback([&] {
    run([&] {
      const auto entries = geez::load_entries(entries_path);
      const auto base = geez::entries_for_system(entries, baseline_label);
      const auto cand = geez::entries_for_system(entries, candidate_label);
      if (base.empty()) throw geez::DataError("no entries for baseline \"" + baseline_label + "\"");
      if (cand.empty()) throw geez::DataError("no entries for candidate \"" + candidate_label + "\"");
      std::cout << geez::render_comparison(geez::compare(base, cand), table_format(report_format));
    });
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  return exit_code;
}
