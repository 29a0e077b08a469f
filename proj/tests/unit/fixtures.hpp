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

#ifndef MHD_TESTS_FIXTURES_HPP_
#define MHD_TESTS_FIXTURES_HPP_

#include <unistd.h>

#include <filesystem>
#include <string>
#include <vector>

#include "mhd/common.hpp"
#include "mhd/corpus.hpp"

namespace mhd::testing {

inline Tweet tweet(std::string id, std::string user, std::string_view when, std::string text,
                   std::string country = "GB", std::string lang = "en") {
  return Tweet{std::move(id), std::move(user), parse_timestamp(when), std::move(text),
               std::move(country), std::move(lang)};
}

inline Date day(std::string_view s) { return Date::parse(s); }

inline DateRange days(std::string_view a, std::string_view b) { return {day(a), day(b)}; }

// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& name) {
    path_ = std::filesystem::temp_directory_path() /
            ("mhd_test_" + name + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace mhd::testing

#endif  // MHD_TESTS_FIXTURES_HPP_
