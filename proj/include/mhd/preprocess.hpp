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

#ifndef MHD_PREPROCESS_HPP_
#define MHD_PREPROCESS_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace mhd {

struct UserTimeline;

namespace text {

// Ordered tokens of one tweet or of a concatenated span of tweets. Tokens
// are non-empty and contain no whitespace.
using TokenSeq = std::vector<std::string>;

inline constexpr std::string_view kMentionToken = "<mention>";
inline constexpr std::string_view kUrlToken = "<url>";

// Emoticons that survive punctuation stripping. Matched case-insensitively
// and emitted lowercased.
const std::vector<std::string>& emoticons();

// Tweet normalization, in order: NFC, @handle -> <mention>, URL -> <url>,
// medial-capital splitting, lowercasing, punctuation stripping (emoticons
// kept whole), whitespace tokenization.
TokenSeq normalize(std::string_view utf8);

std::string join(const TokenSeq& tokens, std::string_view sep = " ");

// NFC + full case folding. Used for case-insensitive phrase matching.
std::string fold_case(std::string_view utf8);

// Share of tweets whose language equals `major_lang`. Throws on an empty
// timeline.
double language_share(const UserTimeline& timeline, std::string_view major_lang);

}  // namespace text
}  // namespace mhd

#endif  // MHD_PREPROCESS_HPP_
