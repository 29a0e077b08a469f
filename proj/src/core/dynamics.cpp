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

#include "mhd/dynamics.hpp"

#include <algorithm>
#include <map>

namespace mhd::dynamics {

std::vector<RatePoint> aggregate_rates(std::span<const DatedPrediction> predictions, bool soft) {
  std::map<Date, std::pair<std::size_t, double>> days;
  for (const auto& p : predictions) {
    auto& [n, pos] = days[p.date];
    ++n;
    if (soft) {
      pos += p.prediction.score;
    } else if (p.prediction.label == Label::kDiagnosed) {
      pos += 1.0;
    }
  }
  std::vector<RatePoint> out;
  out.reserve(days.size());
  for (const auto& [date, counts] : days) {
    out.push_back({date, counts.first, counts.second,
                   counts.second / static_cast<double>(counts.first)});
  }
  return out;
}

RateSeries rate_series(const models::Classifier& model, const features::Vocabulary& vocab,
                       const std::vector<UserTimeline>& timelines,
                       Representation representation, bool soft) {
  if (vocab.hash() != model.vocab_hash()) {
    fail(ErrorCode::kHashMismatch, "rate_series: vocabulary does not match the model");
  }
  const auto samples = sampling::build_samples(timelines, representation);
  std::vector<DatedPrediction> preds;
  preds.reserve(samples.size());
  for (const auto& s : samples) preds.push_back({s.date, model.predict(s.tokens, vocab)});
  RateSeries series;
  series.points = aggregate_rates(preds, soft);
  series.model_id = models::model_id(model);
  series.representation = representation;
  return series;
}

std::vector<RatePoint> moving_average(const std::vector<RatePoint>& series, std::size_t window) {
  if (window < 1) fail(ErrorCode::kInvalidArgument, "moving_average: window must be >= 1");
  std::vector<RatePoint> out = series;
  std::size_t lo = 0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const Date first = series[i].date - static_cast<int>(window - 1);
    while (series[lo].date < first) ++lo;
    // Summed afresh per point; a running sum drifts on long series.
    double sum = 0;
    for (std::size_t j = lo; j <= i; ++j) sum += series[j].rate;
    out[i].rate = sum / static_cast<double>(i - lo + 1);
  }
  return out;
}

std::vector<Spike> detect_spikes(const std::vector<RatePoint>& series, double rel_threshold,
                                 std::size_t baseline_window) {
  std::vector<Spike> spikes;
  if (baseline_window < 1 || series.size() <= baseline_window) return spikes;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const Date first = series[i].date - static_cast<int>(baseline_window);
    double sum = 0;
    std::size_t n = 0;
    for (std::size_t j = i; j-- > 0;) {
      if (series[j].date < first) break;
      sum += series[j].rate;
      ++n;
    }
    if (n == 0) continue;
    const double baseline = sum / static_cast<double>(n);
    if (baseline > 0 && series[i].rate >= (1.0 + rel_threshold) * baseline) {
      spikes.push_back({series[i].date, series[i].rate / baseline - 1.0});
    }
  }
  return spikes;
}

std::vector<KeyDate> parse_key_dates(std::string_view csv) {
  std::vector<KeyDate> out;
  std::size_t line_no = 0;
  for (const auto& raw : split(csv, '\n')) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    std::size_t comma = line.find(',');
    if (comma == std::string_view::npos) {
      fail(ErrorCode::kParse, "key dates line " + std::to_string(line_no) + ": expected date,label");
    }
    std::string_view date = trim(line.substr(0, comma));
    if (line_no == 1 && date == "date") continue;
    out.push_back({Date::parse(date), std::string(trim(line.substr(comma + 1)))});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const KeyDate& a, const KeyDate& b) { return a.date < b.date; });
  return out;
}

std::vector<KeyDate> load_key_dates(const std::string& path) {
  return parse_key_dates(read_file(path));
}

std::vector<Period> period_means(const std::vector<RatePoint>& series,
                                 const std::vector<RatePoint>& smoothed,
                                 const std::vector<KeyDate>& key_dates) {
  if (series.size() != smoothed.size()) {
    fail(ErrorCode::kInvalidArgument, "period_means: series and smoothed differ in length");
  }
  std::vector<Period> periods;
  if (series.empty()) return periods;
  const Date lo = series.front().date;
  const Date hi = series.back().date;

  std::vector<std::pair<Date, std::string>> bounds;  // period starts
  bounds.emplace_back(lo, key_dates.empty() ? "all" : "before " + key_dates.front().label);
  for (std::size_t k = 0; k < key_dates.size(); ++k) {
    std::string label = k + 1 < key_dates.size()
                            ? key_dates[k].label + " to " + key_dates[k + 1].label
                            : "after " + key_dates[k].label;
    bounds.emplace_back(key_dates[k].date, std::move(label));
  }
  for (std::size_t b = 0; b < bounds.size(); ++b) {
    Period p;
    p.label = bounds[b].second;
    p.start = std::max(bounds[b].first, lo);
    p.end = b + 1 < bounds.size() ? std::min(bounds[b + 1].first - 1, hi) : hi;
    if (p.end < p.start) continue;
    double sum = 0, sum_s = 0;
    for (std::size_t i = 0; i < series.size(); ++i) {
      if (series[i].date < p.start || p.end < series[i].date) continue;
      sum += series[i].rate;
      sum_s += smoothed[i].rate;
      ++p.n_days;
    }
    if (p.n_days == 0) continue;
    p.mean_rate = sum / static_cast<double>(p.n_days);
    p.mean_smoothed = sum_s / static_cast<double>(p.n_days);
    periods.push_back(std::move(p));
  }
  return periods;
}

}  // namespace mhd::dynamics
