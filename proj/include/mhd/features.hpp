// Copyright 2026 The mhd Authors.
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

#ifndef MHD_FEATURES_HPP_
#define MHD_FEATURES_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mhd/preprocess.hpp"
#include "mhd/sampling.hpp"

namespace mhd::features {

using TokenId = std::uint32_t;

inline constexpr TokenId kPadId = 0;
inline constexpr TokenId kOovId = 1;
inline constexpr std::string_view kPadToken = "<pad>";
inline constexpr std::string_view kOovToken = "<oov>";

// Token -> index map. Indices 0 and 1 are reserved for <pad> and <oov>;
// the rest follow descending training frequency, ties lexicographic.
class Vocabulary {
 public:
  Vocabulary();

  std::size_t size() const { return tokens_.size(); }
  TokenId id(std::string_view token) const;  // kOovId when unknown
  bool contains(std::string_view token) const;
  const std::string& token(TokenId id) const { return tokens_.at(id); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  // SHA-256 of the serialized form; models record it to refuse mismatched
  // vocabularies.
  const std::string& hash() const { return hash_; }

  // "token<TAB>index" per line, including the reserved entries.
  std::string serialize() const;
  static Vocabulary parse(std::string_view tsv);
  void save(const std::string& path) const;
  static Vocabulary load(const std::string& path);

  static Vocabulary from_tokens(std::vector<std::string> ordered);

  bool operator==(const Vocabulary& other) const { return tokens_ == other.tokens_; }

 private:
  void reindex();

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> index_;
  std::string hash_;
};

// Throws kInvalidArgument on empty input or when no token reaches min_count.
Vocabulary build_vocab(const std::vector<Sample>& train_samples, std::size_t min_count = 2);

// Binary presence vector over vocabulary indices.
struct SparseVector {
  std::size_t dimension = 0;
  std::vector<TokenId> indices;  // strictly increasing

  bool operator==(const SparseVector&) const = default;
};

SparseVector encode_manyhot(const text::TokenSeq& tokens, const Vocabulary& vocab);

inline constexpr std::size_t kDefaultMaxLen = 64;

// Fixed-length id sequence: truncated to max_len, right-padded with <pad>.
std::vector<TokenId> encode_ids(const text::TokenSeq& tokens, const Vocabulary& vocab,
                                std::size_t max_len = kDefaultMaxLen);

// Inverse of encode_ids up to OOV and padding.
text::TokenSeq decode_ids(const std::vector<TokenId>& ids, const Vocabulary& vocab);

}  // namespace mhd::features

#endif  // MHD_FEATURES_HPP_
