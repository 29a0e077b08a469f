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

#ifndef MHD_SAMPLING_HPP_
#define MHD_SAMPLING_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mhd/common.hpp"
#include "mhd/corpus.hpp"
#include "mhd/preprocess.hpp"

namespace mhd {

// Gold class. kUnknown marks samples from unlabeled (deployment) corpora.
enum class Label : int { kControl = 0, kDiagnosed = 1, kUnknown = -1 };

enum class Representation { kIndividual, kUserDay, kUserWeek, kAllUser };

const char* representation_name(Representation r);
Representation parse_representation(std::string_view name);

// Which tweets a sample covers. `key` is the tweet id, the UTC date, the
// ISO week ("2019-W05") or empty for kAllUser.
struct Span {
  Representation kind = Representation::kIndividual;
  std::string key;

  std::string str() const;
  static Span parse(std::string_view text);
  bool operator==(const Span&) const = default;
};

struct Sample {
  std::string user_id;
  Span span;
  text::TokenSeq tokens;
  Label label = Label::kUnknown;
  double weight = 1.0;
  Date date;  // first day of the span

  bool operator==(const Sample&) const = default;
};

namespace sampling {

// Normalizes every tweet and groups tokens by representation, concatenated
// in timestamp order. Samples whose token list comes out empty are dropped.
std::vector<Sample> build_samples(const std::vector<UserTimeline>& timelines,
                                  Representation representation);

enum class SplitUnit { kSample, kUser };

struct SplitConfig {
  double train_fraction = 0.8;
  std::uint64_t seed = 42;
  SplitUnit unit = SplitUnit::kUser;
};

struct SplitResult {
  std::vector<Sample> train;
  std::vector<Sample> validation;
};

// Seeded partition. With kUser every user lands wholly on one side and the
// user counts follow train_fraction; with kSample the sample counts do.
// Input order is kept within each side.
SplitResult split(const std::vector<Sample>& samples, const SplitConfig& config);

enum class Regime { kImbalanced, kBalanced };

const char* regime_name(Regime r);
Regime parse_regime(std::string_view name);

// kBalanced keeps the minority class and downsamples the majority class
// without replacement to the same count. kImbalanced is the identity.
std::vector<Sample> rebalance(const std::vector<Sample>& samples, Regime regime,
                              std::uint64_t seed);

std::vector<Sample> apply_class_weights(std::vector<Sample> samples, double diagnosed_weight);

std::pair<std::size_t, std::size_t> class_counts(const std::vector<Sample>& samples);

std::string sample_to_json(const Sample& s);
Sample sample_from_json(std::string_view line);
void save_samples(const std::vector<Sample>& samples, const std::string& path);
std::vector<Sample> load_samples(const std::string& path);

}  // namespace sampling
}  // namespace mhd

#endif  // MHD_SAMPLING_HPP_
