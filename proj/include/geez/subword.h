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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "geez/script_norm.h"
#include "json.hpp"

namespace geez {

// U+2581, prefixed to the first piece of every word.
inline constexpr std::string_view kBoundaryMarker = "\xE2\x96\x81";
inline constexpr std::string_view kModelFormatVersion = "1";

inline constexpr int32_t kUnkId = 0;
inline constexpr int32_t kPadId = 1;
inline constexpr int32_t kBosId = 2;
inline constexpr int32_t kEosId = 3;
inline constexpr std::string_view kUnkPiece = "<unk>";
inline constexpr std::string_view kPadPiece = "<pad>";
inline constexpr std::string_view kBosPiece = "<s>";
inline constexpr std::string_view kEosPiece = "</s>";
inline constexpr std::size_t kNumSpecials = 4;

enum class AffixSide { kPrefix, kSuffix };

// A protected morpheme boundary: merges never join the affix with the rest
// of the word.
struct Affix {
  std::string form;
  AffixSide side = AffixSide::kPrefix;

  bool operator==(const Affix&) const = default;
};

std::vector<Affix> affixes_from_json(const nlohmann::json& j);
std::vector<Affix> load_affixes(const std::filesystem::path& path);

struct BpeTrainConfig {
  std::size_t vocab_size = 8000;  // includes the four specials
  int64_t min_pair_frequency = 2;
  // Greedy BPE with lexicographic tie-breaking draws no random numbers; the
  // seed is carried for run metadata.
  uint64_t seed = 42;
};

struct TokenSequence {
  std::vector<int32_t> ids;
  // Surface pieces; an <unk> id keeps the characters it replaced here.
  std::vector<std::string> pieces;
};

using MergePair = std::pair<std::string, std::string>;

class TokenizerModel {
 public:
  // `vocab` is indexed by id and must start with the four specials.
  // Throws DataError when any model invariant fails.
  TokenizerModel(NormalizationConfig norm, std::vector<std::string> vocab,
                 std::vector<MergePair> merges, std::vector<Affix> affixes);

  const NormalizationConfig& normalization() const { return normalizer_.config(); }
  const Normalizer& normalizer() const { return normalizer_; }
  const std::vector<std::string>& vocab() const { return vocab_; }
  const std::vector<MergePair>& merges() const { return merges_; }
  const std::vector<Affix>& affixes() const { return affixes_; }

  std::optional<int32_t> id_of(std::string_view piece) const;
  // Throws DataError naming `id` when it is out of range.
  const std::string& piece_of(int32_t id) const;
  std::optional<std::size_t> merge_rank(const std::string& left, const std::string& right) const;

  bool operator==(const TokenizerModel& other) const;

 private:
  struct PairHash {
    std::size_t operator()(const MergePair& p) const;
  };

  Normalizer normalizer_;
  std::vector<std::string> vocab_;
  std::vector<MergePair> merges_;
  std::vector<Affix> affixes_;
  std::unordered_map<std::string, int32_t> ids_;
  std::unordered_map<MergePair, std::size_t, PairHash> ranks_;
};

// Greedy BPE. Each step merges the most frequent adjacent pair, ties going to
// the smallest (left, right) under codepoint order, until the vocabulary
// reaches cfg.vocab_size or no pair occurs min_pair_frequency times. Merges
// never cross word or protected-affix boundaries.
TokenizerModel train_bpe(std::span<const std::string> corpus, const BpeTrainConfig& cfg,
                         const NormalizationConfig& norm, std::span<const Affix> affixes = {});

TokenSequence encode(const TokenizerModel& model, std::string_view text);

// Pad, BOS and EOS ids decode to nothing; <unk> decodes to the literal "<unk>".
std::string decode(const TokenizerModel& model, const TokenSequence& tokens);
std::string decode(const TokenizerModel& model, std::span<const int32_t> ids);

// Joins surface pieces and turns boundary markers back into spaces.
std::string detokenize_pieces(std::span<const std::string> pieces);

// Fraction of emitted ids equal to <unk>.
double oov_rate(const TokenizerModel& model, std::span<const std::string> corpus);

// Byte-stable JSON: sorted keys, two-space indent, trailing newline.
std::string serialize_model(const TokenizerModel& model);
TokenizerModel parse_model(std::string_view text);
void save_model(const TokenizerModel& model, const std::filesystem::path& path);
TokenizerModel load_model(const std::filesystem::path& path);

}  // namespace geez
