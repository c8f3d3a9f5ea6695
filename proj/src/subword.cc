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

#include "geez/subword.h"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "geez/error.h"
#include "geez/utf8.h"

namespace geez {
namespace {

// A word split into symbols. blocked[i] marks a protected boundary between
// symbols i and i + 1.
struct Word {
  std::vector<std::string> symbols;
  std::vector<uint8_t> blocked;
};

Word segment_word(std::string_view word, const std::vector<Affix>& affixes) {
  std::vector<std::string> chars = utf8::split_chars(word);
  Word w;
  w.symbols.reserve(chars.size() + 1);
  w.symbols.emplace_back(kBoundaryMarker);
  std::size_t prefix_chars = 0;
  std::size_t suffix_chars = 0;
  for (const Affix& affix : affixes) {
    if (affix.form.size() >= word.size()) continue;
    const std::size_t n = utf8::split_chars(affix.form).size();
    if (affix.side == AffixSide::kPrefix && word.starts_with(affix.form)) {
      prefix_chars = std::max(prefix_chars, n);
    } else if (affix.side == AffixSide::kSuffix && word.ends_with(affix.form)) {
      suffix_chars = std::max(suffix_chars, n);
    }
  }
  if (prefix_chars + suffix_chars > chars.size()) suffix_chars = 0;
  for (auto& c : chars) w.symbols.push_back(std::move(c));
  w.blocked.assign(w.symbols.size() - 1, 0);
  if (prefix_chars > 0) w.blocked[prefix_chars] = 1;
  if (suffix_chars > 0) w.blocked[w.symbols.size() - 1 - suffix_chars] = 1;
  return w;
}

// Merges every non-overlapping occurrence of (left, right), leftmost first.
void apply_merge(Word& w, const std::string& left, const std::string& right) {
  for (std::size_t i = 0; i + 1 < w.symbols.size(); ++i) {
    if (w.blocked[i] || w.symbols[i] != left || w.symbols[i + 1] != right) continue;
    w.symbols[i] += w.symbols[i + 1];
    w.symbols.erase(w.symbols.begin() + static_cast<std::ptrdiff_t>(i) + 1);
    w.blocked.erase(w.blocked.begin() + static_cast<std::ptrdiff_t>(i));
  }
}

std::string_view side_name(AffixSide side) {
  return side == AffixSide::kPrefix ? "prefix" : "suffix";
}

std::vector<Affix> normalized_affixes(std::span<const Affix> affixes, const Normalizer& norm) {
  std::vector<Affix> out;
  for (const Affix& a : affixes) {
    Affix n{norm(a.form), a.side};
    if (n.form.empty()) throw ConfigError("protected affix is empty after normalization");
    if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(std::move(n));
  }
  return out;
}

// Incrementally maintained adjacent-pair statistics for training.
class PairStats {
 public:
  void add_word(const Word& w, int64_t freq, std::size_t index) {
    for_each_pair(w, [&](const MergePair& p) {
      bump(p, freq);
      where_[p].insert(index);
    });
  }

  void remove_word(const Word& w, int64_t freq, std::size_t index) {
    for_each_pair(w, [&](const MergePair& p) {
      bump(p, -freq);
      if (auto it = where_.find(p); it != where_.end()) it->second.erase(index);
    });
  }

  bool empty() const { return queue_.empty(); }
  const MergePair& best_pair() const { return queue_.begin()->second; }
  int64_t best_count() const { return -queue_.begin()->first; }

  std::vector<std::size_t> words_with(const MergePair& p) const {
    auto it = where_.find(p);
    if (it == where_.end()) return {};
    return {it->second.begin(), it->second.end()};
  }

 private:
  template <typename Fn>
  static void for_each_pair(const Word& w, Fn&& fn) {
    for (std::size_t i = 0; i + 1 < w.symbols.size(); ++i) {
      if (!w.blocked[i]) fn(MergePair{w.symbols[i], w.symbols[i + 1]});
    }
  }

  void bump(const MergePair& p, int64_t delta) {
    int64_t& count = counts_[p];
    if (count > 0) queue_.erase({-count, p});
    count += delta;
    if (count > 0) {
      queue_.insert({-count, p});
    } else {
      counts_.erase(p);
    }
  }

  std::map<MergePair, int64_t> counts_;
  std::map<MergePair, std::set<std::size_t>> where_;
  // Ordered by descending count, then ascending (left, right).
  std::set<std::pair<int64_t, MergePair>> queue_;
};

}  // namespace

std::vector<Affix> affixes_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw DataError("protected affixes must be a JSON array");
  std::vector<Affix> out;
  for (const auto& item : j) {
    if (!item.is_object() || !item.contains("form") || !item.contains("side") ||
        !item["form"].is_string() || !item["side"].is_string()) {
      throw DataError("protected affix entries need string \"form\" and \"side\"");
    }
    Affix a;
    a.form = item["form"].get<std::string>();
    const auto side = item["side"].get<std::string>();
    if (side == "prefix") {
      a.side = AffixSide::kPrefix;
    } else if (side == "suffix") {
      a.side = AffixSide::kSuffix;
    } else {
      throw DataError("protected affix side must be \"prefix\" or \"suffix\", got \"" + side + "\"");
    }
    if (a.form.empty()) throw DataError("protected affix form is empty");
    if (utf8::find_invalid(a.form) != std::string::npos) {
      throw DataError("protected affix form is not valid UTF-8");
    }
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<Affix> load_affixes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open affix file " + path.string());
  try {
    return affixes_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError("malformed affix file " + path.string() + ": " + e.what());
  }
}

std::size_t TokenizerModel::PairHash::operator()(const MergePair& p) const {
  const std::size_t h = std::hash<std::string>{}(p.first);
  return h ^ (std::hash<std::string>{}(p.second) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

TokenizerModel::TokenizerModel(NormalizationConfig norm, std::vector<std::string> vocab,
                               std::vector<MergePair> merges, std::vector<Affix> affixes)
    : normalizer_(std::move(norm)),
      vocab_(std::move(vocab)),
      merges_(std::move(merges)),
      affixes_(std::move(affixes)) {
  static constexpr std::string_view kSpecials[] = {kUnkPiece, kPadPiece, kBosPiece, kEosPiece};
  if (vocab_.size() < kNumSpecials) throw DataError("vocabulary is missing the special tokens");
  for (std::size_t i = 0; i < kNumSpecials; ++i) {
    if (vocab_[i] != kSpecials[i]) {
      throw DataError("id " + std::to_string(i) + " must be the special token " +
                      std::string(kSpecials[i]));
    }
  }
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    if (vocab_[i].empty()) throw DataError("vocabulary entry " + std::to_string(i) + " is empty");
    if (!ids_.emplace(vocab_[i], static_cast<int32_t>(i)).second) {
      throw DataError("vocabulary token \"" + vocab_[i] + "\" appears twice");
    }
  }
  for (std::size_t i = 0; i < merges_.size(); ++i) {
    const auto& [left, right] = merges_[i];
    const std::string label = "merge (\"" + left + "\", \"" + right + "\")";
    if (!ids_.count(left) || !ids_.count(right)) {
      throw DataError(label + " uses a token missing from the vocabulary");
    }
    if (!ids_.count(left + right)) {
      throw DataError(label + " produces \"" + left + right + "\" which is not in the vocabulary");
    }
    if (!ranks_.emplace(merges_[i], i).second) throw DataError(label + " is listed twice");
  }
  for (const Affix& a : affixes_) {
    if (a.form.empty()) throw DataError("protected affix form is empty");
  }
}

std::optional<int32_t> TokenizerModel::id_of(std::string_view piece) const {
  auto it = ids_.find(std::string(piece));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

const std::string& TokenizerModel::piece_of(int32_t id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= vocab_.size()) {
    throw DataError("unknown token id " + std::to_string(id));
  }
  return vocab_[static_cast<std::size_t>(id)];
}

std::optional<std::size_t> TokenizerModel::merge_rank(const std::string& left,
                                                      const std::string& right) const {
  auto it = ranks_.find(MergePair{left, right});
  if (it == ranks_.end()) return std::nullopt;
  return it->second;
}

bool TokenizerModel::operator==(const TokenizerModel& other) const {
  return normalization() == other.normalization() && vocab_ == other.vocab_ &&
         merges_ == other.merges_ && affixes_ == other.affixes_;
}

TokenizerModel train_bpe(std::span<const std::string> corpus, const BpeTrainConfig& cfg,
                         const NormalizationConfig& norm, std::span<const Affix> affixes) {
  if (corpus.empty()) throw DataError("cannot train a tokenizer on an empty corpus");
  if (cfg.vocab_size < kNumSpecials) {
    throw ConfigError("vocab_size " + std::to_string(cfg.vocab_size) +
                      " is smaller than the number of special tokens");
  }
  const Normalizer normalizer(norm);
  std::vector<Affix> protected_affixes = normalized_affixes(affixes, normalizer);

  std::map<std::string, int64_t> word_counts;
  for (const std::string& line : corpus) {
    for (std::string& w : split_whitespace(normalizer(line))) ++word_counts[std::move(w)];
  }
  if (word_counts.empty()) {
    throw DataError("training corpus has no non-whitespace characters after normalization");
  }

  std::vector<Word> words;
  std::vector<int64_t> freqs;
  std::set<std::string> alphabet;
  for (const auto& [text, count] : word_counts) {
    Word w = segment_word(text, protected_affixes);
    alphabet.insert(w.symbols.begin(), w.symbols.end());
    words.push_back(std::move(w));
    freqs.push_back(count);
  }

  std::vector<std::string> vocab = {std::string(kUnkPiece), std::string(kPadPiece),
                                    std::string(kBosPiece), std::string(kEosPiece)};
  std::unordered_set<std::string> known;
  for (const std::string& c : alphabet) {
    vocab.push_back(c);
    known.insert(c);
  }

  PairStats stats;
  for (std::size_t i = 0; i < words.size(); ++i) stats.add_word(words[i], freqs[i], i);

  std::vector<MergePair> merges;
  while (vocab.size() < cfg.vocab_size && !stats.empty() &&
         stats.best_count() >= cfg.min_pair_frequency) {
    const MergePair best = stats.best_pair();
    merges.push_back(best);
    std::string joined = best.first + best.second;
    if (known.insert(joined).second) vocab.push_back(std::move(joined));
    for (std::size_t i : stats.words_with(best)) {
      stats.remove_word(words[i], freqs[i], i);
      apply_merge(words[i], best.first, best.second);
      stats.add_word(words[i], freqs[i], i);
    }
  }
  return TokenizerModel(norm, std::move(vocab), std::move(merges), std::move(protected_affixes));
}

TokenSequence encode(const TokenizerModel& model, std::string_view text) {
  TokenSequence out;
  for (const std::string& word : split_whitespace(model.normalizer()(text))) {
    Word w = segment_word(word, model.affixes());
    while (true) {
      std::optional<std::size_t> best_rank;
      std::size_t best_at = 0;
      for (std::size_t i = 0; i + 1 < w.symbols.size(); ++i) {
        if (w.blocked[i]) continue;
        auto rank = model.merge_rank(w.symbols[i], w.symbols[i + 1]);
        if (rank && (!best_rank || *rank < *best_rank)) {
          best_rank = rank;
          best_at = i;
        }
      }
      if (!best_rank) break;
      w.symbols[best_at] += w.symbols[best_at + 1];
      w.symbols.erase(w.symbols.begin() + static_cast<std::ptrdiff_t>(best_at) + 1);
      w.blocked.erase(w.blocked.begin() + static_cast<std::ptrdiff_t>(best_at));
    }
    const std::size_t word_start = out.ids.size();
    for (std::string& piece : w.symbols) {
      if (auto id = model.id_of(piece)) {
        out.ids.push_back(*id);
        out.pieces.push_back(std::move(piece));
        continue;
      }
      // An unseen character absorbs a bare word marker in front of it.
      if (out.ids.size() == word_start + 1 && out.pieces.back() == kBoundaryMarker) {
        out.ids.back() = kUnkId;
        out.pieces.back() += piece;
        continue;
      }
      out.ids.push_back(kUnkId);
      out.pieces.push_back(std::move(piece));
    }
  }
  return out;
}

namespace {

std::string markers_to_spaces(std::string_view joined) {
  std::string out;
  out.reserve(joined.size());
  std::size_t pos = 0;
  while (pos < joined.size()) {
    if (joined.substr(pos).starts_with(kBoundaryMarker)) {
      out.push_back(' ');
      pos += kBoundaryMarker.size();
    } else {
      out.push_back(joined[pos++]);
    }
  }
  if (!out.empty() && out.front() == ' ') out.erase(0, 1);
  return out;
}

}  // namespace

std::string decode(const TokenizerModel& model, const TokenSequence& tokens) {
  const bool have_pieces = tokens.pieces.size() == tokens.ids.size();
  std::string joined;
  for (std::size_t i = 0; i < tokens.ids.size(); ++i) {
    const int32_t id = tokens.ids[i];
    const std::string& piece = model.piece_of(id);
    if (id == kPadId || id == kBosId || id == kEosId) continue;
    if (id == kUnkId && have_pieces && tokens.pieces[i].starts_with(kBoundaryMarker)) {
      joined += kBoundaryMarker;
    }
    joined += piece;
  }
  return markers_to_spaces(joined);
}

std::string decode(const TokenizerModel& model, std::span<const int32_t> ids) {
  TokenSequence tokens;
  tokens.ids.assign(ids.begin(), ids.end());
  return decode(model, tokens);
}

std::string detokenize_pieces(std::span<const std::string> pieces) {
  std::string joined;
  for (const std::string& p : pieces) joined += p;
  return markers_to_spaces(joined);
}

double oov_rate(const TokenizerModel& model, std::span<const std::string> corpus) {
  if (corpus.empty()) throw DataError("cannot compute an OOV rate over an empty corpus");
  std::size_t total = 0;
  std::size_t unknown = 0;
  for (const std::string& line : corpus) {
    const TokenSequence seq = encode(model, line);
    total += seq.ids.size();
    unknown += static_cast<std::size_t>(std::count(seq.ids.begin(), seq.ids.end(), kUnkId));
  }
  return total == 0 ? 0.0 : static_cast<double>(unknown) / static_cast<double>(total);
}

std::string serialize_model(const TokenizerModel& model) {
  nlohmann::json vocab = nlohmann::json::array();
  for (std::size_t i = 0; i < model.vocab().size(); ++i) vocab.push_back({model.vocab()[i], i});
  nlohmann::json merges = nlohmann::json::array();
  for (const auto& [left, right] : model.merges()) merges.push_back({left, right});
  nlohmann::json affixes = nlohmann::json::array();
  for (const Affix& a : model.affixes()) {
    affixes.push_back({{"form", a.form}, {"side", side_name(a.side)}});
  }
  const nlohmann::json j = {
      {"boundary_marker", kBoundaryMarker},
      {"merges", std::move(merges)},
      {"normalization", to_json(model.normalization())},
      {"protected_affixes", std::move(affixes)},
      {"specials", {{"unk", kUnkId}, {"pad", kPadId}, {"bos", kBosId}, {"eos", kEosId}}},
      {"version", kModelFormatVersion},
      {"vocab", std::move(vocab)},
  };
  return j.dump(2) + "\n";
}

TokenizerModel parse_model(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  }
  if (!j.is_object()) throw DataError("model file must hold a JSON object");
  for (const char* key : {"version", "normalization", "specials", "vocab", "merges",
                          "boundary_marker"}) {
    if (!j.contains(key)) throw DataError(std::string("model file is missing \"") + key + "\"");
  }
  if (!j["version"].is_string() || j["version"].get<std::string>() != kModelFormatVersion) {
    throw DataError("unsupported model format version " + j["version"].dump() + " (expected \"" +
                    std::string(kModelFormatVersion) + "\")");
  }
  if (j["boundary_marker"] != kBoundaryMarker) {
    throw DataError("model boundary marker must be U+2581");
  }
  const nlohmann::json expected_specials = {
      {"unk", kUnkId}, {"pad", kPadId}, {"bos", kBosId}, {"eos", kEosId}};
  if (j["specials"] != expected_specials) {
    throw DataError("model specials must be unk=0, pad=1, bos=2, eos=3");
  }

  NormalizationConfig norm;
  try {
    norm = normalization_config_from_json(j["normalization"]);
  } catch (const ConfigError& e) {
    throw DataError(std::string("model normalization: ") + e.what());
  }

  const auto& jv = j["vocab"];
  if (!jv.is_array()) throw DataError("model \"vocab\" must be an array");
  std::vector<std::string> vocab(jv.size());
  std::vector<bool> seen(jv.size(), false);
  for (const auto& entry : jv) {
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string() ||
        !entry[1].is_number_integer()) {
      throw DataError("vocab entries must be [token, id] pairs");
    }
    const auto id = entry[1].get<int64_t>();
    if (id < 0 || static_cast<std::size_t>(id) >= vocab.size() || seen[static_cast<std::size_t>(id)]) {
      throw DataError("vocab ids must be dense and unique; bad id " + std::to_string(id));
    }
    seen[static_cast<std::size_t>(id)] = true;
    vocab[static_cast<std::size_t>(id)] = entry[0].get<std::string>();
  }

  const auto& jm = j["merges"];
  if (!jm.is_array()) throw DataError("model \"merges\" must be an array");
  std::vector<MergePair> merges;
  for (const auto& entry : jm) {
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string() || !entry[1].is_string()) {
      throw DataError("merge entries must be [left, right] string pairs");
    }
    merges.emplace_back(entry[0].get<std::string>(), entry[1].get<std::string>());
  }

  std::vector<Affix> affixes;
  if (j.contains("protected_affixes")) affixes = affixes_from_json(j["protected_affixes"]);
  return TokenizerModel(std::move(norm), std::move(vocab), std::move(merges), std::move(affixes));
}

void save_model(const TokenizerModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write model file " + path.string());
  out << serialize_model(model);
  if (!out) throw IoError("failed writing model file " + path.string());
}

TokenizerModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

}  // namespace geez
