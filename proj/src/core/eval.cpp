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

#include "mhd/eval.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "json.hpp"

namespace mhd::eval {

using ojson = nlohmann::ordered_json;

double ConfusionMatrix::accuracy() const {
  const auto n = total();
  return n == 0 ? 0.0 : static_cast<double>(tp + tn) / static_cast<double>(n);
}

ConfusionMatrix confusion(std::span<const Label> predicted, std::span<const Label> gold) {
  if (predicted.size() != gold.size()) {
    fail(ErrorCode::kInvalidArgument, "confusion: " + std::to_string(predicted.size()) +
                                          " predictions vs " + std::to_string(gold.size()) +
                                          " gold labels");
  }
  if (predicted.empty()) fail(ErrorCode::kInvalidArgument, "confusion: no predictions");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (gold[i] == Label::kUnknown || predicted[i] == Label::kUnknown) {
      fail(ErrorCode::kInvalidArgument, "confusion: unknown label at index " + std::to_string(i));
    }
    const bool p = predicted[i] == Label::kDiagnosed;
    const bool g = gold[i] == Label::kDiagnosed;
    if (p && g) ++cm.tp;
    else if (p) ++cm.fp;
    else if (g) ++cm.fn;
    else ++cm.tn;
  }
  return cm;
}

namespace {

ClassMetrics class_metrics(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn) {
  ClassMetrics m;
  if (tp + fp > 0) {
    m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  } else {
    m.degenerate = true;
  }
  if (tp + fn > 0) {
    m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  } else {
    m.degenerate = true;
  }
  if (m.precision + m.recall > 0) {
    m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
  } else {
    m.degenerate = true;
  }
  return m;
}

// Series expansion of the regularized lower incomplete gamma, x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < 10000; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Lentz continued fraction for Q(a, x), x >= a + 1.
double gamma_q_fraction(double a, double x) {
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

std::string fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

MetricsReport metrics(const ConfusionMatrix& cm) {
  MetricsReport r;
  r.diagnosed = class_metrics(cm.tp, cm.fp, cm.fn);
  r.control = class_metrics(cm.tn, cm.fn, cm.fp);
  r.macro_f1 = (r.diagnosed.f1 + r.control.f1) / 2.0;
  return r;
}

const char* baseline_name(Baseline b) { return b == Baseline::kUniform ? "uniform" : "weighted"; }

double gamma_q(double a, double x) {
  if (!(a > 0) || x < 0 || std::isnan(x)) {
    fail(ErrorCode::kInvalidArgument, "gamma_q: need a > 0 and x >= 0");
  }
  if (x == 0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_fraction(a, x);
}

double chi_square_sf(double x, unsigned dof) {
  if (dof == 0) fail(ErrorCode::kInvalidArgument, "chi_square_sf: dof must be >= 1");
  if (x <= 0) return 1.0;
  return gamma_q(0.5 * dof, 0.5 * x);
}

SignificanceResult chi_square(std::span<const double> observed, Baseline baseline,
                              std::optional<std::vector<double>> class_prior) {
  if (observed.size() < 2) fail(ErrorCode::kInvalidArgument, "chi_square: need >= 2 classes");
  double total = 0;
  for (double o : observed) {
    if (o < 0 || !std::isfinite(o)) {
      fail(ErrorCode::kInvalidArgument, "chi_square: observed counts must be finite and >= 0");
    }
    total += o;
  }
  if (!(total > 0)) fail(ErrorCode::kInvalidArgument, "chi_square: observed total must be > 0");

  SignificanceResult r;
  r.baseline = baseline;
  r.observed.assign(observed.begin(), observed.end());
  r.dof = static_cast<unsigned>(observed.size() - 1);
  if (baseline == Baseline::kUniform) {
    r.expected.assign(observed.size(), total / static_cast<double>(observed.size()));
  } else {
    if (!class_prior || class_prior->size() != observed.size()) {
      fail(ErrorCode::kInvalidArgument,
           "chi_square: weighted baseline needs a class prior per class");
    }
    const double mass = std::accumulate(class_prior->begin(), class_prior->end(), 0.0);
    if (!(mass > 0)) fail(ErrorCode::kInvalidArgument, "chi_square: class prior sums to 0");
    for (double p : *class_prior) {
      if (p < 0) fail(ErrorCode::kInvalidArgument, "chi_square: negative class prior");
      r.expected.push_back(total * p / mass);
    }
  }
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (!(r.expected[i] > 0)) {
      fail(ErrorCode::kInvalidArgument,
           "chi_square: expected count is zero for class " + std::to_string(i));
    }
    const double diff = observed[i] - r.expected[i];
    r.chi2 += diff * diff / r.expected[i];
  }
  r.p_value = chi_square_sf(r.chi2, r.dof);
  return r;
}

std::string format_p_value(double p) {
  if (p < 1e-5) return "< 0.00001";
  return fixed(p, 5);
}

namespace {

ojson class_json(const ClassMetrics& m) {
  ojson j;
  j["precision"] = m.precision;
  j["recall"] = m.recall;
  j["f1"] = m.f1;
  j["degenerate"] = m.degenerate;
  return j;
}

}  // namespace

std::string metrics_json(const ConfusionMatrix& cm, const MetricsReport& m,
                         const std::string& split_name) {
  ojson j;
  j["split"] = split_name;
  j["confusion"] = {{"tp", cm.tp}, {"fp", cm.fp}, {"fn", cm.fn}, {"tn", cm.tn}};
  j["accuracy"] = cm.accuracy();
  j["control"] = class_json(m.control);
  j["diagnosed"] = class_json(m.diagnosed);
  j["macro_f1"] = m.macro_f1;
  return j.dump(2) + "\n";
}

std::string metrics_table(const MetricsReport& m, const std::string& row_label) {
  char buf[512];
  std::string out;
  std::snprintf(buf, sizeof buf, "%-16s %-22s %-22s %s\n", "", "Control", "Diagnosed", "Macro");
  out += buf;
  std::snprintf(buf, sizeof buf, "%-16s %-6s %-6s %-8s %-6s %-6s %-8s %s\n", "", "P", "R", "F1",
                "P", "R", "F1", "F1");
  out += buf;
  std::snprintf(buf, sizeof buf, "%-16s %-6s %-6s %-8s %-6s %-6s %-8s %s\n", row_label.c_str(),
                fixed(m.control.precision).c_str(), fixed(m.control.recall).c_str(),
                fixed(m.control.f1).c_str(), fixed(m.diagnosed.precision).c_str(),
                fixed(m.diagnosed.recall).c_str(), fixed(m.diagnosed.f1).c_str(),
                fixed(m.macro_f1).c_str());
  out += buf;
  return out;
}

std::string significance_json(const std::vector<SignificanceResult>& results) {
  ojson arr = ojson::array();
  for (const auto& r : results) {
    ojson j;
    j["baseline"] = baseline_name(r.baseline);
    j["chi2"] = r.chi2;
    j["dof"] = r.dof;
    j["p_value"] = r.p_value;
    j["p_display"] = format_p_value(r.p_value);
    j["observed"] = r.observed;
    j["expected"] = r.expected;
    arr.push_back(std::move(j));
  }
  ojson root;
  root["tests"] = std::move(arr);
  return root.dump(2) + "\n";
}

std::string significance_table(const std::vector<SignificanceResult>& results,
                               const std::string& row_label) {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-16s %-10s %s\n", "", "Baseline", "Significance");
  out += buf;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    std::string stat = "chi2=" + fixed(r.chi2, 0) + " (p " +
                       (r.p_value < 1e-5 ? std::string("< 0.00001")
                                         : "= " + format_p_value(r.p_value)) +
                       ")";
    std::string name = baseline_name(r.baseline);
    name[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
    std::snprintf(buf, sizeof buf, "%-16s %-10s %s\n", i == 0 ? row_label.c_str() : "",
                  name.c_str(), stat.c_str());
    out += buf;
  }
  return out;
}

}  // namespace mhd::eval
