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

#include <algorithm>
#include <cstdio>
#include <filesystem>

#include "json.hpp"
#include "mhd/dynamics.hpp"

namespace mhd::dynamics {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

constexpr double kWidth = 960, kHeight = 420;
constexpr double kLeft = 64, kRight = 24, kTop = 32, kBottom = 48;

std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

ojson point_json(const RatePoint& p) {
  ojson j;
  j["date"] = p.date.str();
  j["n_samples"] = p.n_samples;
  j["n_positive"] = p.n_positive;
  j["rate"] = p.rate;
  return j;
}

void check_aligned(const RateSeries& series, const std::vector<RatePoint>& smoothed) {
  if (series.points.size() != smoothed.size()) {
    fail(ErrorCode::kInvalidArgument, "report: smoothed series does not match the raw series");
  }
}

}  // namespace

std::string series_to_json(const RateSeries& series) {
  ojson j;
  j["country"] = series.country;
  j["model_id"] = series.model_id;
  j["representation"] = representation_name(series.representation);
  ojson pts = ojson::array();
  for (const auto& p : series.points) pts.push_back(point_json(p));
  j["points"] = std::move(pts);
  return j.dump(2) + "\n";
}

RateSeries series_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    RateSeries s;
    s.country = j.at("country").get<std::string>();
    s.model_id = j.at("model_id").get<std::string>();
    s.representation = parse_representation(j.at("representation").get<std::string>());
    for (const auto& p : j.at("points")) {
      RatePoint r;
      r.date = Date::parse(p.at("date").get<std::string>());
      r.n_samples = p.at("n_samples").get<std::size_t>();
      r.n_positive = p.at("n_positive").get<double>();
      r.rate = p.at("rate").get<double>();
      if (!s.points.empty() && !(s.points.back().date < r.date)) {
        fail(ErrorCode::kParse, "rate series dates must be strictly increasing");
      }
      s.points.push_back(r);
    }
    return s;
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse, std::string("malformed rate series: ") + e.what());
  }
}

std::string rates_csv(const std::vector<RatePoint>& series, const std::vector<RatePoint>& smoothed) {
  if (series.size() != smoothed.size()) {
    fail(ErrorCode::kInvalidArgument, "rates_csv: smoothed series does not match the raw series");
  }
  std::string out = "date,n_samples,n_positive,rate,smoothed_rate\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& p = series[i];
    out += p.date.str() + "," + std::to_string(p.n_samples) + "," + format_double(p.n_positive) +
           "," + format_double(p.rate) + "," + format_double(smoothed[i].rate) + "\n";
  }
  return out;
}

std::string rates_svg(const RateSeries& series, const std::vector<RatePoint>& smoothed,
                      const std::vector<KeyDate>& key_dates, const std::vector<Spike>& spikes) {
  check_aligned(series, smoothed);
  const auto& pts = series.points;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  Date lo{0}, hi{0};
  double ymax = 0;
  if (!pts.empty()) {
    lo = pts.front().date;
    hi = pts.back().date;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      ymax = std::max({ymax, pts[i].rate, smoothed[i].rate});
    }
  }
  ymax = ymax > 0 ? ymax * 1.1 : 1.0;
  const double span_days = std::max(1, hi - lo);
  auto x_of = [&](Date d) { return kLeft + plot_w * (d - lo) / span_days; };
  auto y_of = [&](double r) { return kTop + plot_h * (1.0 - r / ymax); };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + coord(kWidth) + "\" height=\"" +
         coord(kHeight) + "\" viewBox=\"0 0 " + coord(kWidth) + " " + coord(kHeight) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + coord(kLeft) + "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">" +
         xml_escape("Daily depression rate " + series.country + " (" + series.model_id + ", " +
                    representation_name(series.representation) + ")") +
         "</text>\n";

  // Axes with five horizontal gridlines.
  svg += "<g stroke=\"#999\" stroke-width=\"1\">\n";
  svg += "<line x1=\"" + coord(kLeft) + "\" y1=\"" + coord(kTop + plot_h) + "\" x2=\"" +
         coord(kLeft + plot_w) + "\" y2=\"" + coord(kTop + plot_h) + "\"/>\n";
  svg += "<line x1=\"" + coord(kLeft) + "\" y1=\"" + coord(kTop) + "\" x2=\"" + coord(kLeft) +
         "\" y2=\"" + coord(kTop + plot_h) + "\"/>\n";
  svg += "</g>\n<g font-family=\"sans-serif\" font-size=\"10\" fill=\"#333\">\n";
  for (int k = 0; k <= 4; ++k) {
    const double r = ymax * k / 4.0;
    svg += "<text x=\"" + coord(kLeft - 6) + "\" y=\"" + coord(y_of(r) + 3) +
           "\" text-anchor=\"end\">" + coord(r * 100.0) + "%</text>\n";
  }
  if (!pts.empty()) {
    svg += "<text x=\"" + coord(kLeft) + "\" y=\"" + coord(kHeight - 16) + "\">" + lo.str() +
           "</text>\n";
    svg += "<text x=\"" + coord(kLeft + plot_w) + "\" y=\"" + coord(kHeight - 16) +
           "\" text-anchor=\"end\">" + hi.str() + "</text>\n";
  }
  svg += "</g>\n";

  for (const auto& k : key_dates) {
    if (pts.empty() || k.date < lo || hi < k.date) continue;
    const std::string x = coord(x_of(k.date));
    svg += "<line x1=\"" + x + "\" y1=\"" + coord(kTop) + "\" x2=\"" + x + "\" y2=\"" +
           coord(kTop + plot_h) + "\" stroke=\"#c33\" stroke-dasharray=\"4 3\"/>\n";
    svg += "<text x=\"" + x + "\" y=\"" + coord(kTop - 4) +
           "\" font-family=\"sans-serif\" font-size=\"10\" fill=\"#c33\">" + xml_escape(k.label) +
           "</text>\n";
  }

  auto polyline = [&](const std::vector<RatePoint>& s, const char* style) {
    std::string line = "<polyline fill=\"none\" " + std::string(style) + " points=\"";
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (i) line += ' ';
      line += coord(x_of(s[i].date)) + "," + coord(y_of(s[i].rate));
    }
    return line + "\"/>\n";
  };
  svg += polyline(pts, "stroke=\"#9ab\" stroke-width=\"1\"");
  svg += polyline(smoothed, "stroke=\"#135\" stroke-width=\"2\"");

  for (const auto& s : spikes) {
    auto it = std::lower_bound(pts.begin(), pts.end(), s.date,
                               [](const RatePoint& p, Date d) { return p.date < d; });
    if (it == pts.end() || it->date != s.date) continue;
    svg += "<circle cx=\"" + coord(x_of(s.date)) + "\" cy=\"" + coord(y_of(it->rate)) +
           "\" r=\"4\" fill=\"#e80\"><title>" + s.date.str() + " +" +
           coord(s.relative_increase * 100.0) + "%</title></circle>\n";
  }
  svg += "</svg>\n";
  return svg;
}

std::string summary_json(const RateSeries& series, const std::vector<RatePoint>& smoothed,
                         const std::vector<KeyDate>& key_dates, const std::vector<Spike>& spikes) {
  check_aligned(series, smoothed);
  ojson j;
  j["country"] = series.country;
  j["model_id"] = series.model_id;
  j["representation"] = representation_name(series.representation);
  j["n_days"] = series.points.size();
  if (!series.points.empty()) {
    j["first_day"] = series.points.front().date.str();
    j["last_day"] = series.points.back().date.str();
    double sum = 0;
    std::size_t n = 0;
    for (const auto& p : series.points) {
      sum += p.rate;
      n += p.n_samples;
    }
    j["n_samples"] = n;
    j["mean_rate"] = sum / static_cast<double>(series.points.size());
  }
  ojson periods = ojson::array();
  for (const auto& p : period_means(series.points, smoothed, key_dates)) {
    ojson pj;
    pj["label"] = p.label;
    pj["start"] = p.start.str();
    pj["end"] = p.end.str();
    pj["n_days"] = p.n_days;
    pj["mean_rate"] = p.mean_rate;
    pj["mean_smoothed_rate"] = p.mean_smoothed;
    periods.push_back(std::move(pj));
  }
  j["periods"] = std::move(periods);
  ojson sp = ojson::array();
  for (const auto& s : spikes) {
    sp.push_back({{"date", s.date.str()}, {"relative_increase", s.relative_increase}});
  }
  j["spikes"] = std::move(sp);
  ojson kd = ojson::array();
  for (const auto& k : key_dates) kd.push_back({{"date", k.date.str()}, {"label", k.label}});
  j["key_dates"] = std::move(kd);
  return j.dump(2) + "\n";
}

ReportFiles report(const RateSeries& series, const std::vector<RatePoint>& smoothed,
                   const std::vector<KeyDate>& key_dates, const std::vector<Spike>& spikes,
                   const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) fail(ErrorCode::kIo, "cannot create '" + out_dir + "': " + ec.message());
  const std::string country = series.country.empty() ? "XX" : series.country;
  const std::string stem =
      (fs::path(out_dir) / ("rate_" + country + "_" + series.model_id)).string();
  ReportFiles files{stem + ".csv", stem + ".svg", stem + "_summary.json"};
  write_file(files.csv, rates_csv(series.points, smoothed));
  write_file(files.svg, rates_svg(series, smoothed, key_dates, spikes));
  write_file(files.summary, summary_json(series, smoothed, key_dates, spikes));
  return files;
}

}  // namespace mhd::dynamics
