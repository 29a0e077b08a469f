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

#include "mhd/preprocess.hpp"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <algorithm>
#include <string>

#include "mhd/common.hpp"
#include "mhd/corpus.hpp"

namespace mhd::text {
namespace {

using U32 = std::u32string;

const icu::Normalizer2& nfc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || n == nullptr) {
    fail(ErrorCode::kInternal, "ICU NFC normalizer unavailable");
  }
  return *n;
}

icu::UnicodeString nfc_string(std::string_view utf8) {
  icu::UnicodeString s = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString out = nfc().normalize(s, status);
  if (U_FAILURE(status)) fail(ErrorCode::kInternal, "NFC normalization failed");
  return out;
}

U32 to_u32(const icu::UnicodeString& s) {
  U32 out;
  out.reserve(static_cast<std::size_t>(s.length()));
  for (int32_t i = 0; i < s.length();) {
    UChar32 c = s.char32At(i);
    out.push_back(static_cast<char32_t>(c));
    i += U16_LENGTH(c);
  }
  return out;
}

icu::UnicodeString from_u32(const U32& s) {
  icu::UnicodeString out;
  for (char32_t c : s) out.append(static_cast<UChar32>(c));
  return out;
}

std::string to_utf8(const icu::UnicodeString& s) {
  std::string out;
  s.toUTF8String(out);
  return out;
}

bool is_word_char(char32_t c) { return c == U'_' || u_isalnum(static_cast<UChar32>(c)); }

bool is_handle_char(char32_t c) {
  return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z') ||
         (c >= U'0' && c <= U'9') || c == U'_';
}

bool is_ascii_alpha(char32_t c) {
  return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z');
}

bool is_space(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)); }

char32_t ascii_lower(char32_t c) {
  return (c >= U'A' && c <= U'Z') ? c - U'A' + U'a' : c;
}

// Case-insensitive (ASCII) match of `pat` at s[i].
bool match_at(const U32& s, std::size_t i, std::u32string_view pat) {
  if (i + pat.size() > s.size()) return false;
  for (std::size_t k = 0; k < pat.size(); ++k) {
    if (ascii_lower(s[i + k]) != ascii_lower(pat[k])) return false;
  }
  return true;
}

// Length of a URL starting at s[i], or 0.
std::size_t url_length(const U32& s, std::size_t i) {
  std::size_t j = i;
  if (match_at(s, i, U"www.")) {
    j = i + 4;
  } else {
    if (j >= s.size() || !is_ascii_alpha(s[j])) return 0;
    while (j < s.size() && (is_ascii_alpha(s[j]) || (s[j] >= U'0' && s[j] <= U'9') ||
                            s[j] == U'+' || s[j] == U'.' || s[j] == U'-')) {
      ++j;
    }
    if (!match_at(s, j, U"://")) return 0;
    j += 3;
  }
  std::size_t body = j;
  while (j < s.size() && !is_space(s[j])) ++j;
  return j > body ? j - i : 0;
}

struct Emoticon {
  U32 pattern;
  std::string canonical;
};

const std::vector<Emoticon>& emoticon_table() {
  static const std::vector<Emoticon> table = [] {
    std::vector<Emoticon> t;
    for (const auto& e : emoticons()) {
      U32 p = to_u32(icu::UnicodeString::fromUTF8(e));
      std::string canon;
      for (char c : e) canon.push_back(static_cast<char>(ascii_lower(static_cast<char32_t>(c))));
      t.push_back({std::move(p), std::move(canon)});
    }
    // Longest first so ":'(" wins over ":(".
    std::stable_sort(t.begin(), t.end(), [](const Emoticon& a, const Emoticon& b) {
      return a.pattern.size() > b.pattern.size();
    });
    return t;
  }();
  return table;
}

const Emoticon* emoticon_at(const U32& s, std::size_t i) {
  for (const auto& e : emoticon_table()) {
    if (!match_at(s, i, e.pattern)) continue;
    std::size_t end = i + e.pattern.size();
    if (is_word_char(e.pattern.front()) && i > 0 && is_word_char(s[i - 1])) continue;
    if (is_word_char(e.pattern.back()) && end < s.size() && is_word_char(s[end])) continue;
    return &e;
  }
  return nullptr;
}

bool strip_char(char32_t c) {
  auto uc = static_cast<UChar32>(c);
  if (is_space(c)) return false;
  if (u_ispunct(uc)) return true;
  if (c < 0x80) return !is_word_char(c);
  return u_iscntrl(uc);
}

// Medial-capital split, lowercase, strip, tokenize.
void process_text(const U32& piece, TokenSeq& out) {
  U32 split;
  split.reserve(piece.size() + 8);
  for (std::size_t i = 0; i < piece.size(); ++i) {
    char32_t c = piece[i];
    if (i > 0 && u_islower(static_cast<UChar32>(piece[i - 1])) &&
        u_isupper(static_cast<UChar32>(c)) &&
        u_tolower(static_cast<UChar32>(c)) != static_cast<UChar32>(c)) {
      split.push_back(U' ');
    }
    split.push_back(c);
  }
  icu::UnicodeString lowered = from_u32(split);
  lowered.toLower(icu::Locale::getRoot());
  U32 chars = to_u32(lowered);

  U32 current;
  auto flush = [&] {
    if (current.empty()) return;
    UErrorCode status = U_ZERO_ERROR;
    icu::UnicodeString tok = nfc().normalize(from_u32(current), status);
    if (U_FAILURE(status)) fail(ErrorCode::kInternal, "NFC normalization failed");
    out.push_back(to_utf8(tok));
    current.clear();
  };
  for (char32_t c : chars) {
    if (is_space(c)) {
      flush();
    } else if (!strip_char(c)) {
      current.push_back(c);
    }
  }
  flush();
}

}  // namespace

const std::vector<std::string>& emoticons() {
  static const std::vector<std::string> set = {":)", ":(", ":D", ";)", ":P",
                                               ":/", "<3", ":'(", "xD"};
  return set;
}

TokenSeq normalize(std::string_view utf8) {
  const U32 s = to_u32(nfc_string(utf8));
  TokenSeq tokens;
  U32 pending;
  auto emit_atomic = [&](std::string token) {
    process_text(pending, tokens);
    pending.clear();
    tokens.push_back(std::move(token));
  };

  std::size_t i = 0;
  while (i < s.size()) {
    const bool word_start = i == 0 || !is_word_char(s[i - 1]);
    if (word_start) {
      if (std::size_t n = url_length(s, i); n > 0) {
        emit_atomic(std::string(kUrlToken));
        i += n;
        continue;
      }
    }
    if (match_at(s, i, U"<mention>")) {
      emit_atomic(std::string(kMentionToken));
      i += 9;
      continue;
    }
    if (match_at(s, i, U"<url>")) {
      emit_atomic(std::string(kUrlToken));
      i += 5;
      continue;
    }
    if (s[i] == U'@' && word_start && i + 1 < s.size() && is_handle_char(s[i + 1])) {
      std::size_t j = i + 1;
      while (j < s.size() && is_handle_char(s[j])) ++j;
      emit_atomic(std::string(kMentionToken));
      i = j;
      continue;
    }
    if (const Emoticon* e = emoticon_at(s, i)) {
      emit_atomic(e->canonical);
      i += e->pattern.size();
      continue;
    }
    pending.push_back(s[i]);
    ++i;
  }
  process_text(pending, tokens);
  return tokens;
}

std::string join(const TokenSeq& tokens, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out.append(sep);
    out.append(tokens[i]);
  }
  return out;
}

std::string fold_case(std::string_view utf8) {
  icu::UnicodeString s = nfc_string(utf8);
  s.foldCase();
  return to_utf8(s);
}

double language_share(const UserTimeline& timeline, std::string_view major_lang) {
  if (timeline.tweets.empty()) {
    fail(ErrorCode::kInvalidArgument,
         "language_share: empty timeline for user '" + timeline.user_id + "'");
  }
  std::size_t major = 0;
  for (const auto& t : timeline.tweets) {
    if (t.lang == major_lang) ++major;
  }
  return static_cast<double>(major) / static_cast<double>(timeline.tweets.size());
}

}  // namespace mhd::text
