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

#include "mhd/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

#include "json.hpp"

namespace mhd {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

const char* representation_name(Representation r) {
  switch (r) {
    case Representation::kIndividual:
      return "individual";
    case Representation::kUserDay:
      return "user-day";
    case Representation::kUserWeek:
      return "user-week";
    case Representation::kAllUser:
      return "all-user";
  }
  return "individual";
}

Representation parse_representation(std::string_view name) {
  if (name == "individual") return Representation::kIndividual;
  if (name == "user-day") return Representation::kUserDay;
  if (name == "user-week") return Representation::kUserWeek;
  if (name == "all-user") return Representation::kAllUser;
  fail(ErrorCode::kInvalidArgument, "unknown representation '" + std::string(name) + "'");
}

std::string Span::str() const {
  std::string out = representation_name(kind);
  if (kind != Representation::kAllUser) out += ":" + key;
  return out;
}

Span Span::parse(std::string_view text) {
  std::size_t colon = text.find(':');
  Span s;
  s.kind = parse_representation(text.substr(0, colon));
  if (colon != std::string_view::npos) s.key = std::string(text.substr(colon + 1));
  return s;
}

namespace sampling {
namespace {

Label label_of(Group g) {
  switch (g) {
    case Group::kDiagnosed:
      return Label::kDiagnosed;
    case Group::kControl:
      return Label::kControl;
    case Group::kUnlabeled:
      return Label::kUnknown;
  }
  return Label::kUnknown;
}

void append(text::TokenSeq& dst, text::TokenSeq src) {
  dst.insert(dst.end(), std::make_move_iterator(src.begin()), std::make_move_iterator(src.end()));
}

}  // namespace

std::vector<Sample> build_samples(const std::vector<UserTimeline>& timelines,
                                  Representation representation) {
  std::vector<Sample> out;
  for (const auto& tl : timelines) {
    const Label label = label_of(tl.group);
    std::vector<Sample> user_samples;
    // Timeline tweets are ascending, so grouping by consecutive key keeps
    // both the per-span token order and the span order.
    std::string current_key;
    for (const auto& tweet : tl.tweets) {
      const Date day = Date::of(tweet.timestamp);
      std::string key;
      Date start = day;
      switch (representation) {
        case Representation::kIndividual:
          key = tweet.id;
          break;
        case Representation::kUserDay:
          key = day.str();
          break;
        case Representation::kUserWeek: {
          IsoWeek w = IsoWeek::of(day);
          key = w.str();
          start = w.monday();
          break;
        }
        case Representation::kAllUser:
          key.clear();
          break;
      }
      if (user_samples.empty() || representation == Representation::kIndividual ||
          key != current_key) {
        Sample s;
        s.user_id = tl.user_id;
        s.span = Span{representation, key};
        s.label = label;
        s.date = start;
        user_samples.push_back(std::move(s));
        current_key = key;
      }
      append(user_samples.back().tokens, text::normalize(tweet.text));
    }
    for (auto& s : user_samples) {
      if (!s.tokens.empty()) out.push_back(std::move(s));
    }
  }
  return out;
}

SplitResult split(const std::vector<Sample>& samples, const SplitConfig& config) {
  if (!(config.train_fraction > 0.0 && config.train_fraction < 1.0)) {
    fail(ErrorCode::kInvalidArgument, "split: train_fraction must be in (0,1)");
  }
  if (samples.size() < 2) fail(ErrorCode::kInvalidArgument, "split: need at least 2 samples");
  Rng rng(derive_seed(config.seed, "split"));
  std::vector<bool> to_train(samples.size(), false);

  auto target = [&](std::size_t n) {
    auto k = static_cast<std::size_t>(std::llround(config.train_fraction * static_cast<double>(n)));
    return std::clamp<std::size_t>(k, 1, n - 1);
  };

  if (config.unit == SplitUnit::kSample) {
    std::vector<std::size_t> order(samples.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(order);
    const std::size_t k = target(order.size());
    for (std::size_t i = 0; i < k; ++i) to_train[order[i]] = true;
  } else {
    std::set<std::string> user_set;
    for (const auto& s : samples) user_set.insert(s.user_id);
    std::vector<std::string> users(user_set.begin(), user_set.end());
    if (users.size() < 2) {
      fail(ErrorCode::kInvalidArgument, "split: user unit needs at least 2 users");
    }
    rng.shuffle(users);
    const std::size_t k = target(users.size());
    std::set<std::string> train_users(users.begin(), users.begin() + static_cast<std::ptrdiff_t>(k));
    for (std::size_t i = 0; i < samples.size(); ++i) {
      to_train[i] = train_users.count(samples[i].user_id) > 0;
    }
  }

  SplitResult result;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    (to_train[i] ? result.train : result.validation).push_back(samples[i]);
  }
  return result;
}

const char* regime_name(Regime r) {
  return r == Regime::kBalanced ? "balanced" : "imbalanced";
}

Regime parse_regime(std::string_view name) {
  if (name == "balanced") return Regime::kBalanced;
  if (name == "imbalanced") return Regime::kImbalanced;
  fail(ErrorCode::kInvalidArgument, "unknown regime '" + std::string(name) + "'");
}

std::pair<std::size_t, std::size_t> class_counts(const std::vector<Sample>& samples) {
  std::size_t control = 0, diagnosed = 0;
  for (const auto& s : samples) {
    if (s.label == Label::kControl) ++control;
    if (s.label == Label::kDiagnosed) ++diagnosed;
  }
  return {control, diagnosed};
}

std::vector<Sample> rebalance(const std::vector<Sample>& samples, Regime regime,
                              std::uint64_t seed) {
  auto [n_control, n_diagnosed] = class_counts(samples);
  if (n_control == 0 || n_diagnosed == 0) {
    fail(ErrorCode::kInvalidArgument, "rebalance: both classes must be present");
  }
  if (regime == Regime::kImbalanced) return samples;

  const Label majority = n_control >= n_diagnosed ? Label::kControl : Label::kDiagnosed;
  const std::size_t keep = std::min(n_control, n_diagnosed);
  std::vector<std::size_t> majority_idx;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].label == majority) majority_idx.push_back(i);
  }
  Rng rng(derive_seed(seed, "rebalance"));
  // Partial Fisher-Yates: the first `keep` slots are a uniform draw.
  for (std::size_t i = 0; i < keep; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.below(majority_idx.size() - i));
    std::swap(majority_idx[i], majority_idx[j]);
  }
  std::vector<bool> chosen(samples.size(), false);
  for (std::size_t i = 0; i < keep; ++i) chosen[majority_idx[i]] = true;

  std::vector<Sample> out;
  out.reserve(2 * keep);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].label == Label::kUnknown) continue;
    if (samples[i].label != majority || chosen[i]) out.push_back(samples[i]);
  }
  return out;
}

std::vector<Sample> apply_class_weights(std::vector<Sample> samples, double diagnosed_weight) {
  if (!(diagnosed_weight > 0.0) || !std::isfinite(diagnosed_weight)) {
    fail(ErrorCode::kInvalidArgument, "diagnosed_weight must be a positive finite number");
  }
  for (auto& s : samples) s.weight = s.label == Label::kDiagnosed ? diagnosed_weight : 1.0;
  return samples;
}

std::string sample_to_json(const Sample& s) {
  ojson j;
  j["user_id"] = s.user_id;
  j["span"] = s.span.str();
  j["date"] = s.date.str();
  if (s.label == Label::kUnknown) {
    j["label"] = nullptr;
  } else {
    j["label"] = static_cast<int>(s.label);
  }
  j["weight"] = s.weight;
  j["tokens"] = s.tokens;
  return j.dump();
}

Sample sample_from_json(std::string_view line) {
  try {
    json j = json::parse(line);
    Sample s;
    s.user_id = j.at("user_id").get<std::string>();
    s.span = Span::parse(j.at("span").get<std::string>());
    s.date = Date::parse(j.at("date").get<std::string>());
    const auto& label = j.at("label");
    if (label.is_null()) {
      s.label = Label::kUnknown;
    } else {
      int v = label.get<int>();
      if (v != 0 && v != 1) fail(ErrorCode::kParse, "sample label must be 0, 1 or null");
      s.label = static_cast<Label>(v);
    }
    s.weight = j.at("weight").get<double>();
    s.tokens = j.at("tokens").get<text::TokenSeq>();
    if (!(s.weight > 0)) fail(ErrorCode::kParse, "sample weight must be positive");
    return s;
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse, std::string("bad sample record: ") + e.what());
  }
}

void save_samples(const std::vector<Sample>& samples, const std::string& path) {
  std::string out;
  for (const auto& s : samples) {
    out += sample_to_json(s);
    out += '\n';
  }
  write_file(path, out);
}

std::vector<Sample> load_samples(const std::string& path) {
  std::vector<Sample> out;
  for (const auto& line : mhd::split(read_file(path), '\n')) {
    if (!trim(line).empty()) out.push_back(sample_from_json(line));
  }
  return out;
}

}  // namespace sampling
}  // namespace mhd
