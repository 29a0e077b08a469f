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

#ifndef MHD_EVAL_HPP_
#define MHD_EVAL_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mhd/sampling.hpp"

namespace mhd::eval {

// Diagnosed is the positive class.
struct ConfusionMatrix {
  std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;

  std::uint64_t total() const { return tp + fp + fn + tn; }
  double accuracy() const;
  bool operator==(const ConfusionMatrix&) const = default;
};

ConfusionMatrix confusion(std::span<const Label> predicted, std::span<const Label> gold);

struct ClassMetrics {
  double precision = 0, recall = 0, f1 = 0;
  // Set when a zero denominator forced a metric to 0.
  bool degenerate = false;
};

struct MetricsReport {
  ClassMetrics control;
  ClassMetrics diagnosed;
  double macro_f1 = 0;
};

MetricsReport metrics(const ConfusionMatrix& cm);

enum class Baseline { kUniform, kWeighted };

const char* baseline_name(Baseline b);

struct SignificanceResult {
  double chi2 = 0;
  double p_value = 1;
  unsigned dof = 0;
  Baseline baseline = Baseline::kUniform;
  std::vector<double> observed;
  std::vector<double> expected;
};

// Pearson goodness-of-fit of observed class counts against a uniform or
// prior-weighted expectation. dof = classes - 1.
SignificanceResult chi_square(std::span<const double> observed, Baseline baseline,
                              std::optional<std::vector<double>> class_prior = std::nullopt);

// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
double gamma_q(double a, double x);

// Survival function of the chi-square distribution.
double chi_square_sf(double x, unsigned dof);

// "< 0.00001" below 1e-5, otherwise fixed notation.
std::string format_p_value(double p);

// JSON and aligned-text renderings.
std::string metrics_json(const ConfusionMatrix& cm, const MetricsReport& m,
                         const std::string& split_name);
std::string metrics_table(const MetricsReport& m, const std::string& row_label);
std::string significance_json(const std::vector<SignificanceResult>& results);
std::string significance_table(const std::vector<SignificanceResult>& results,
                               const std::string& row_label);

}  // namespace mhd::eval

#endif  // MHD_EVAL_HPP_
