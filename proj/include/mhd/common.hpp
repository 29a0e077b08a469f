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

#ifndef MHD_COMMON_HPP_
#define MHD_COMMON_HPP_

#include <compare>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mhd {

// Error categories. The numeric values are shared with the C API status codes.
enum class ErrorCode : int {
  kInvalidArgument = 1,
  kIo = 2,
  kParse = 3,
  kHashMismatch = 4,
  kNumeric = 5,
  kMissingAnnotation = 6,
  kInternal = 7,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Raised when distant-supervision candidates lack a human verdict.
class MissingAnnotationError : public Error {
 public:
  explicit MissingAnnotationError(std::vector<std::string> tweet_ids);

  const std::vector<std::string>& tweet_ids() const { return tweet_ids_; }

 private:
  std::vector<std::string> tweet_ids_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

// Seconds since the Unix epoch, UTC.
using UnixSeconds = std::int64_t;

// A UTC calendar day, stored as days since 1970-01-01.
struct Date {
  std::int32_t days = 0;

  static Date from_ymd(int year, unsigned month, unsigned day);
  static Date of(UnixSeconds t);
  // Parses "YYYY-MM-DD".
  static Date parse(std::string_view text);

  std::string str() const;
  UnixSeconds start_seconds() const {
    return static_cast<UnixSeconds>(days) * 86400;
  }
  Date operator+(int n) const { return Date{days + n}; }
  Date operator-(int n) const { return Date{days - n}; }
  int operator-(Date other) const { return days - other.days; }

  auto operator<=>(const Date&) const = default;
};

// Inclusive range of UTC days.
struct DateRange {
  Date start;
  Date end;

  bool empty() const { return end < start; }
  bool contains(Date d) const { return start <= d && d <= end; }
  bool contains(UnixSeconds t) const { return contains(Date::of(t)); }
  int length() const { return empty() ? 0 : end - start + 1; }

  // Parses "START..END" or "START,END".
  static DateRange parse(std::string_view text);
  std::string str() const;

  bool operator==(const DateRange&) const = default;
};

struct IsoWeek {
  int year = 0;
  unsigned week = 0;

  static IsoWeek of(Date d);
  Date monday() const;
  std::string str() const;  // "2019-W05"

  auto operator<=>(const IsoWeek&) const = default;
};

// ISO-8601 timestamps: "YYYY-MM-DDTHH:MM:SS[.fff][Z|(+|-)HH:MM]". A missing
// offset means UTC.
UnixSeconds parse_timestamp(std::string_view text);
std::string format_timestamp(UnixSeconds t);

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::string& path);

std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream);

// Seeded generator with platform-independent draws (std distributions are
// implementation-defined, so they are not used).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);
  // Uniform integer in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(
                    below(static_cast<std::uint64_t>(hi - lo) + 1));
  }
  bool bernoulli(double p) { return uniform() < p; }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }
  template <typename T>
  void shuffle(std::vector<T>& items) {
    shuffle(std::span<T>(items));
  }

 private:
  std::mt19937_64 engine_;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

std::vector<std::string> split(std::string_view text, char sep);
std::string_view trim(std::string_view text);

// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

}  // namespace mhd

#endif  // MHD_COMMON_HPP_
