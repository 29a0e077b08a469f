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

#ifndef MHD_DYNAMICS_HPP_
#define MHD_DYNAMICS_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mhd/common.hpp"
#include "mhd/models.hpp"
#include "mhd/sampling.hpp"

namespace mhd::dynamics {

struct RatePoint {
  Date date;
  std::size_t n_samples = 0;
  double n_positive = 0;  // integral unless soft scores were averaged
  double rate = 0;

  bool operator==(const RatePoint&) const = default;
};

// Daily rate of depression. Days without samples are absent.
struct RateSeries {
  std::vector<RatePoint> points;  // strictly increasing dates
  std::string country;
  std::string model_id;
  Representation representation = Representation::kIndividual;
};

struct DatedPrediction {
  Date date;
  models::Prediction prediction;
};

// R_t = (1/N_t) * sum of per-sample indicators. With `soft` the raw scores
// are averaged instead of hard Diagnosed labels.
std::vector<RatePoint> aggregate_rates(std::span<const DatedPrediction> predictions,
                                       bool soft = false);

// Scores every sample built from `timelines` and aggregates by sample date.
RateSeries rate_series(const models::Classifier& model, const features::Vocabulary& vocab,
                       const std::vector<UserTimeline>& timelines,
                       Representation representation, bool soft = false);

// Trailing mean over the `window` calendar days ending at each point.
// Missing days count in neither numerator nor denominator.
std::vector<RatePoint> moving_average(const std::vector<RatePoint>& series, std::size_t window = 7);

struct Spike {
  Date date;
  double relative_increase = 0;  // rate / baseline - 1

  bool operator==(const Spike&) const = default;
};

// Days whose raw rate is at least (1 + rel_threshold) times the mean of the
// available rates in the preceding `baseline_window` calendar days. Series
// no longer than `baseline_window` yield no spikes.
std::vector<Spike> detect_spikes(const std::vector<RatePoint>& series, double rel_threshold = 0.5,
                                 std::size_t baseline_window = 7);

struct KeyDate {
  Date date;
  std::string label;
};

// CSV "date,label" with an optional header row.
std::vector<KeyDate> parse_key_dates(std::string_view csv);
std::vector<KeyDate> load_key_dates(const std::string& path);

struct Period {
  std::string label;
  Date start;
  Date end;
  std::size_t n_days = 0;
  double mean_rate = 0;
  double mean_smoothed = 0;
};

// Splits the series at each key date: [.., k1), [k1, k2), .., [kn, ..].
std::vector<Period> period_means(const std::vector<RatePoint>& series,
                                 const std::vector<RatePoint>& smoothed,
                                 const std::vector<KeyDate>& key_dates);

struct ReportFiles {
  std::string csv;
  std::string svg;
  std::string summary;
};

std::string series_to_json(const RateSeries& series);
RateSeries series_from_json(std::string_view text);

std::string rates_csv(const std::vector<RatePoint>& series, const std::vector<RatePoint>& smoothed);
std::string rates_svg(const RateSeries& series, const std::vector<RatePoint>& smoothed,
                      const std::vector<KeyDate>& key_dates, const std::vector<Spike>& spikes);
std::string summary_json(const RateSeries& series, const std::vector<RatePoint>& smoothed,
                         const std::vector<KeyDate>& key_dates, const std::vector<Spike>& spikes);

// Writes rate_<country>_<model>.csv / .svg / _summary.json under out_dir.
ReportFiles report(const RateSeries& series, const std::vector<RatePoint>& smoothed,
                   const std::vector<KeyDate>& key_dates, const std::vector<Spike>& spikes,
                   const std::string& out_dir);

}  // namespace mhd::dynamics

#endif  // MHD_DYNAMICS_HPP_
