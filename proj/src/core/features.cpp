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

#include "mhd/features.hpp"

#include <algorithm>
#include <charconv>
#include <map>

namespace mhd::features {

Vocabulary::Vocabulary() {
  tokens_ = {std::string(kPadToken), std::string(kOovToken)};
  reindex();
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> ordered) {
  Vocabulary v;
  v.tokens_.insert(v.tokens_.end(), std::make_move_iterator(ordered.begin()),
                   std::make_move_iterator(ordered.end()));
  v.reindex();
  return v;
}

void Vocabulary::reindex() {
  index_.clear();
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (tokens_[i].empty() ||
        tokens_[i].find_first_of(" \t\r\n") != std::string::npos) {
      fail(ErrorCode::kInvalidArgument, "vocabulary token empty or contains whitespace");
    }
    if (!index_.emplace(tokens_[i], static_cast<TokenId>(i)).second) {
      fail(ErrorCode::kInvalidArgument, "duplicate vocabulary token '" + tokens_[i] + "'");
    }
  }
  hash_ = sha256_hex(serialize());
}

TokenId Vocabulary::id(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end() || it->second < 2) return kOovId;
  return it->second;
}

bool Vocabulary::contains(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it != index_.end() && it->second >= 2;
}

std::string Vocabulary::serialize() const {
  std::string out;
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    out += tokens_[i];
    out += '\t';
    out += std::to_string(i);
    out += '\n';
  }
  return out;
}

Vocabulary Vocabulary::parse(std::string_view tsv) {
  std::vector<std::string> tokens;
  std::size_t line_no = 0;
  for (const auto& line : split(tsv, '\n')) {
    ++line_no;
    if (line.empty()) continue;
    auto cols = split(line, '\t');
    std::size_t index = 0;
    if (cols.size() == 2) {
      auto [ptr, ec] = std::from_chars(cols[1].data(), cols[1].data() + cols[1].size(), index);
      if (ec != std::errc() || ptr != cols[1].data() + cols[1].size()) cols.clear();
    }
    if (cols.size() != 2 || index != tokens.size()) {
      fail(ErrorCode::kParse, "vocabulary line " + std::to_string(line_no) +
                                  ": expected 'token<TAB>" + std::to_string(tokens.size()) + "'");
    }
    tokens.push_back(cols[0]);
  }
  if (tokens.size() < 2 || tokens[0] != kPadToken || tokens[1] != kOovToken) {
    fail(ErrorCode::kParse, "vocabulary must start with <pad> and <oov>");
  }
  tokens.erase(tokens.begin(), tokens.begin() + 2);
  return from_tokens(std::move(tokens));
}

void Vocabulary::save(const std::string& path) const { write_file(path, serialize()); }

Vocabulary Vocabulary::load(const std::string& path) { return parse(read_file(path)); }

Vocabulary build_vocab(const std::vector<Sample>& train_samples, std::size_t min_count) {
  if (train_samples.empty()) fail(ErrorCode::kInvalidArgument, "build_vocab: no samples");
  std::map<std::string, std::size_t> counts;
  for (const auto& s : train_samples) {
    for (const auto& t : s.tokens) ++counts[t];
  }
  std::vector<std::pair<std::string, std::size_t>> kept;
  for (auto& [tok, n] : counts) {
    if (n >= min_count && tok != kPadToken && tok != kOovToken) kept.emplace_back(tok, n);
  }
  if (kept.empty()) {
    fail(ErrorCode::kInvalidArgument, "build_vocab: no token reaches min_count=" +
                                          std::to_string(min_count));
  }
  std::stable_sort(kept.begin(), kept.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> ordered;
  ordered.reserve(kept.size());
  for (auto& [tok, _] : kept) ordered.push_back(std::move(tok));
  return Vocabulary::from_tokens(std::move(ordered));
}

SparseVector encode_manyhot(const text::TokenSeq& tokens, const Vocabulary& vocab) {
  SparseVector v;
  v.dimension = vocab.size();
  v.indices.reserve(tokens.size());
  for (const auto& t : tokens) v.indices.push_back(vocab.id(t));
  std::sort(v.indices.begin(), v.indices.end());
  v.indices.erase(std::unique(v.indices.begin(), v.indices.end()), v.indices.end());
  return v;
}

std::vector<TokenId> encode_ids(const text::TokenSeq& tokens, const Vocabulary& vocab,
                                std::size_t max_len) {
  if (max_len == 0) fail(ErrorCode::kInvalidArgument, "encode_ids: max_len must be > 0");
  std::vector<TokenId> ids(max_len, kPadId);
  const std::size_t n = std::min(max_len, tokens.size());
  for (std::size_t i = 0; i < n; ++i) ids[i] = vocab.id(tokens[i]);
  return ids;
}

text::TokenSeq decode_ids(const std::vector<TokenId>& ids, const Vocabulary& vocab) {
  text::TokenSeq out;
  for (TokenId id : ids) {
    if (id == kPadId) continue;
    out.push_back(vocab.token(id));
  }
  return out;
}

}  // namespace mhd::features
