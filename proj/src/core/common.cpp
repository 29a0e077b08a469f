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

#include "mhd/common.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

namespace mhd {

namespace chr = std::chrono;

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid_argument";
    case ErrorCode::kIo:
      return "io_error";
    case ErrorCode::kParse:
      return "parse_error";
    case ErrorCode::kHashMismatch:
      return "hash_mismatch";
    case ErrorCode::kNumeric:
      return "numeric_failure";
    case ErrorCode::kMissingAnnotation:
      return "missing_annotation";
    case ErrorCode::kInternal:
      return "internal_error";
  }
  return "unknown";
}

namespace {

std::string missing_message(const std::vector<std::string>& ids) {
  std::string msg = "unannotated candidate tweets (" +
                    std::to_string(ids.size()) + "):";
  for (const auto& id : ids) msg += " " + id;
  return msg;
}

int parse_int(std::string_view text, std::string_view what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    fail(ErrorCode::kParse, "bad " + std::string(what) + " in '" +
                                std::string(text) + "'");
  }
  return value;
}

}  // namespace

MissingAnnotationError::MissingAnnotationError(std::vector<std::string> tweet_ids)
    : Error(ErrorCode::kMissingAnnotation, missing_message(tweet_ids)),
      tweet_ids_(std::move(tweet_ids)) {}

void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

Date Date::from_ymd(int year, unsigned month, unsigned day) {
  chr::year_month_day ymd{chr::year{year}, chr::month{month}, chr::day{day}};
  if (!ymd.ok()) {
    fail(ErrorCode::kParse, "invalid calendar date " + std::to_string(year) +
                                "-" + std::to_string(month) + "-" +
                                std::to_string(day));
  }
  return Date{static_cast<std::int32_t>(
      chr::sys_days{ymd}.time_since_epoch().count())};
}

Date Date::of(UnixSeconds t) {
  // Floor division so pre-epoch instants land on the right day.
  UnixSeconds d = t / 86400;
  if (t % 86400 < 0) --d;
  return Date{static_cast<std::int32_t>(d)};
}

Date Date::parse(std::string_view text) {
  text = trim(text);
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
    fail(ErrorCode::kParse, "expected YYYY-MM-DD, got '" + std::string(text) + "'");
  }
  return from_ymd(parse_int(text.substr(0, 4), "year"),
                  static_cast<unsigned>(parse_int(text.substr(5, 2), "month")),
                  static_cast<unsigned>(parse_int(text.substr(8, 2), "day")));
}

std::string Date::str() const {
  chr::year_month_day ymd{chr::sys_days{chr::days{days}}};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()));
  return buf;
}

DateRange DateRange::parse(std::string_view text) {
  std::size_t pos = text.find("..");
  std::size_t skip = 2;
  if (pos == std::string_view::npos) {
    pos = text.find(',');
    skip = 1;
  }
  if (pos == std::string_view::npos) {
    fail(ErrorCode::kParse, "expected START..END, got '" + std::string(text) + "'");
  }
  return DateRange{Date::parse(text.substr(0, pos)),
                   Date::parse(text.substr(pos + skip))};
}

std::string DateRange::str() const { return start.str() + ".." + end.str(); }

IsoWeek IsoWeek::of(Date d) {
  // The ISO week belongs to the year containing its Thursday.
  chr::sys_days day{chr::days{d.days}};
  unsigned wd = chr::weekday{day}.iso_encoding();  // Mon=1..Sun=7
  chr::sys_days thursday = day + chr::days{4 - static_cast<int>(wd)};
  chr::year_month_day ymd{thursday};
  chr::sys_days jan1{ymd.year() / chr::January / 1};
  unsigned week =
      static_cast<unsigned>((thursday - jan1).count() / 7 + 1);
  return IsoWeek{static_cast<int>(ymd.year()), week};
}

Date IsoWeek::monday() const {
  // Week 1 is the week containing January 4th.
  chr::sys_days jan4{chr::year{year} / chr::January / 4};
  unsigned wd = chr::weekday{jan4}.iso_encoding();
  chr::sys_days week1 = jan4 - chr::days{static_cast<int>(wd) - 1};
  chr::sys_days mon = week1 + chr::days{7 * (static_cast<int>(week) - 1)};
  return Date{static_cast<std::int32_t>(mon.time_since_epoch().count())};
}

std::string IsoWeek::str() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-W%02u", year, week);
  return buf;
}

UnixSeconds parse_timestamp(std::string_view text) {
  text = trim(text);
  if (text.size() < 19 || (text[10] != 'T' && text[10] != ' ') ||
      text[13] != ':' || text[16] != ':') {
    fail(ErrorCode::kParse, "bad ISO-8601 timestamp '" + std::string(text) + "'");
  }
  Date d = Date::parse(text.substr(0, 10));
  int hh = parse_int(text.substr(11, 2), "hour");
  int mm = parse_int(text.substr(14, 2), "minute");
  int ss = parse_int(text.substr(17, 2), "second");
  if (hh > 23 || mm > 59 || ss > 60) {
    fail(ErrorCode::kParse, "bad time of day in '" + std::string(text) + "'");
  }
  std::size_t i = 19;
  if (i < text.size() && (text[i] == '.' || text[i] == ',')) {
    ++i;
    while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
  }
  int offset = 0;
  std::string_view rest = text.substr(i);
  if (rest == "Z" || rest.empty()) {
    offset = 0;
  } else if ((rest[0] == '+' || rest[0] == '-') &&
             (rest.size() == 6 || rest.size() == 5)) {
    std::size_t mpos = rest.size() == 6 ? 4 : 3;
    if (rest.size() == 6 && rest[3] != ':') {
      fail(ErrorCode::kParse, "bad UTC offset in '" + std::string(text) + "'");
    }
    int oh = parse_int(rest.substr(1, 2), "offset hour");
    int om = parse_int(rest.substr(mpos, 2), "offset minute");
    offset = (oh * 3600 + om * 60) * (rest[0] == '-' ? -1 : 1);
  } else {
    fail(ErrorCode::kParse, "bad UTC offset in '" + std::string(text) + "'");
  }
  return d.start_seconds() + hh * 3600 + mm * 60 + ss - offset;
}

std::string format_timestamp(UnixSeconds t) {
  Date d = Date::of(t);
  UnixSeconds s = t - d.start_seconds();
  char buf[32];
  std::snprintf(buf, sizeof buf, "%sT%02d:%02d:%02dZ", d.str().c_str(),
                static_cast<int>(s / 3600), static_cast<int>(s / 60 % 60),
                static_cast<int>(s % 60));
  return buf;
}

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                              EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1) {
    fail(ErrorCode::kInternal, "SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

std::string sha256_file(const std::string& path) { return sha256_hex(read_file(path)); }

std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream) {
  // FNV-1a over the stream name, then a splitmix64 finalizer.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : stream) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::uint64_t z = seed ^ h;
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) fail(ErrorCode::kInvalidArgument, "Rng::below(0)");
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    std::uint64_t x = next();
    if (x >= threshold) return x % n;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) fail(ErrorCode::kIo, "read failure on '" + path + "'");
  return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.flush();
  if (!out) fail(ErrorCode::kIo, "write failure on '" + path + "'");
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    std::size_t pos = text.find(sep, start);
    parts.emplace_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string_view trim(std::string_view text) {
  const char* ws = " \t\r\n";
  std::size_t b = text.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  std::size_t e = text.find_last_not_of(ws);
  return text.substr(b, e - b + 1);
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) fail(ErrorCode::kInternal, "to_chars failed");
  return std::string(buf, ptr);
}

}  // namespace mhd
