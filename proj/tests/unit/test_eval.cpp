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

#include <gtest/gtest.h>

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "mhd/common.hpp"
#include "mhd/eval.hpp"

namespace mhd::eval {
namespace {

// Per-class P/R/F1 straight from the definitions, zero on empty denominators.
struct Prf {
  double p, r, f;
};

Prf prf(double tp, double fp, double fn) {
  const double p = tp + fp > 0 ? tp / (tp + fp) : 0;
  const double r = tp + fn > 0 ? tp / (tp + fn) : 0;
  const double f = p + r > 0 ? 2 * p * r / (p + r) : 0;
  return {p, r, f};
}

TEST(Confusion, CountsAndErrors) {
  const std::vector<Label> gold = {Label::kDiagnosed, Label::kDiagnosed, Label::kControl,
                                   Label::kControl, Label::kControl};
  const std::vector<Label> pred = {Label::kDiagnosed, Label::kControl, Label::kDiagnosed,
                                   Label::kControl, Label::kControl};
  EXPECT_EQ(confusion(pred, gold), (ConfusionMatrix{1, 1, 1, 2}));
  auto perfect = confusion(gold, gold);
  EXPECT_EQ(perfect.fp + perfect.fn, 0u);
  EXPECT_THROW(confusion(std::vector<Label>{Label::kControl}, gold), Error);
  EXPECT_THROW(confusion(std::vector<Label>{}, std::vector<Label>{}), Error);
}

TEST(Confusion, MatchesRecount) {
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Label> p, g;
    std::uint64_t c[2][2] = {{0, 0}, {0, 0}};
    for (auto n = rng.between(1, 50); n > 0; --n) {
      const int a = static_cast<int>(rng.below(2)), b = static_cast<int>(rng.below(2));
      p.push_back(a ? Label::kDiagnosed : Label::kControl);
      g.push_back(b ? Label::kDiagnosed : Label::kControl);
      ++c[a][b];
    }
    EXPECT_EQ(confusion(p, g), (ConfusionMatrix{c[1][1], c[1][0], c[0][1], c[0][0]}));
  }
}

TEST(Metrics, MajorityPredictorOnTwentyFourToOne) {
  std::vector<Label> gold(2400, Label::kControl);
  gold.resize(2500, Label::kDiagnosed);
  const std::vector<Label> pred(2500, Label::kControl);
  const auto cm = confusion(pred, gold);
  EXPECT_EQ(cm.accuracy(), 0.96);
  EXPECT_EQ(cm.tp, 0u);
  const auto m = metrics(cm);
  EXPECT_EQ(m.diagnosed.f1, 0.0);
  EXPECT_TRUE(m.diagnosed.degenerate);
  EXPECT_FALSE(m.control.degenerate);
}

TEST(Metrics, HandComputedFixture) {
  const auto m = metrics({31, 66, 69, 934});
  // Diagnosed: P = 31/97, R = 31/100. Control: P = 934/1003, R = 934/1000.
  EXPECT_NEAR(m.diagnosed.precision, 0.31958762886597936, 1e-9);
  EXPECT_NEAR(m.diagnosed.recall, 0.31, 1e-9);
  EXPECT_NEAR(m.diagnosed.f1, 62.0 / 197.0, 1e-9);
  EXPECT_NEAR(m.control.precision, 934.0 / 1003.0, 1e-9);
  EXPECT_NEAR(m.control.recall, 0.934, 1e-9);
  EXPECT_NEAR(m.control.f1, 1868.0 / 2003.0, 1e-9);
  EXPECT_NEAR(m.macro_f1, (62.0 / 197.0 + 1868.0 / 2003.0) / 2, 1e-9);
}

TEST(Metrics, DegenerateAndSymmetric) {
  const auto d = metrics({0, 0, 0, 10});
  EXPECT_EQ(d.diagnosed.precision, 0.0);
  EXPECT_EQ(d.diagnosed.recall, 0.0);
  EXPECT_TRUE(d.diagnosed.degenerate);
  const auto s = metrics({40, 7, 7, 40});
  EXPECT_DOUBLE_EQ(s.control.precision, s.diagnosed.precision);
  EXPECT_DOUBLE_EQ(s.control.f1, s.diagnosed.f1);
}

TEST(MetricsProperty, BruteForceAndClassSwap) {
  Rng rng(77);
  for (int trial = 0; trial < 1000; ++trial) {
    ConfusionMatrix cm{rng.below(60), rng.below(60), rng.below(60), rng.below(60)};
    const auto m = metrics(cm);
    const Prf d = prf(cm.tp, cm.fp, cm.fn), c = prf(cm.tn, cm.fn, cm.fp);
    EXPECT_NEAR(m.diagnosed.precision, d.p, 1e-9);
    EXPECT_NEAR(m.diagnosed.recall, d.r, 1e-9);
    EXPECT_NEAR(m.diagnosed.f1, d.f, 1e-9);
    EXPECT_NEAR(m.control.precision, c.p, 1e-9);
    EXPECT_NEAR(m.control.recall, c.r, 1e-9);
    EXPECT_NEAR(m.control.f1, c.f, 1e-9);
    EXPECT_NEAR(m.macro_f1, (d.f + c.f) / 2, 1e-9);
    EXPECT_NEAR(metrics({cm.tn, cm.fn, cm.fp, cm.tp}).macro_f1, m.macro_f1, 1e-12);
  }
}

TEST(MetricsProperty, SelfAgreementIsPerfect) {
  Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Label> p;
    for (auto n = rng.between(2, 40); n > 0; --n) {
      p.push_back(rng.below(2) ? Label::kDiagnosed : Label::kControl);
    }
    p[0] = Label::kDiagnosed;
    p[1] = Label::kControl;
    const auto m = metrics(confusion(p, p));
    EXPECT_EQ(m.diagnosed.f1, 1.0);
    EXPECT_EQ(m.control.f1, 1.0);
    EXPECT_EQ(m.macro_f1, 1.0);
  }
}

TEST(ChiSquare, HandValues) {
  const std::vector<double> skewed = {90, 10};
  auto r = chi_square(skewed, Baseline::kUniform);
  EXPECT_DOUBLE_EQ(r.chi2, 64.0);
  EXPECT_EQ(r.dof, 1u);
  EXPECT_EQ(r.expected, (std::vector<double>{50, 50}));
  const std::vector<double> even = {50, 50};
  auto z = chi_square(even, Baseline::kUniform);
  EXPECT_EQ(z.chi2, 0.0);
  EXPECT_EQ(z.p_value, 1.0);
  auto w = chi_square(skewed, Baseline::kWeighted, std::vector<double>{0.9, 0.1});
  EXPECT_NEAR(w.chi2, 0.0, 1e-12);
  EXPECT_NEAR(w.p_value, 1.0, 1e-12);
}

TEST(ChiSquare, Errors) {
  const std::vector<double> obs = {5, 5};
  EXPECT_THROW(chi_square(obs, Baseline::kWeighted), Error);
  EXPECT_THROW(chi_square(obs, Baseline::kWeighted, std::vector<double>{1.0, 0.0}), Error);
  const std::vector<double> none = {0, 0};
  EXPECT_THROW(chi_square(none, Baseline::kUniform), Error);
}

TEST(ChiSquare, SurvivalMatchesOracles) {
  // dof 1: Q(1/2, x/2) = erfc(sqrt(x/2)).
  EXPECT_NEAR(chi_square_sf(3.841, 1), 0.05, 1e-3);
  EXPECT_NEAR(chi_square_sf(3.841, 1), std::erfc(std::sqrt(3.841 / 2)), 1e-12);
  for (unsigned dof : {1u, 2u, 3u, 5u, 10u}) {
    for (double x : {0.01, 0.5, 1.0, 3.841, 7.0, 20.0, 64.0, 200.0}) {
      const double oracle = boost::math::gamma_q(dof / 2.0, x / 2.0);
      EXPECT_NEAR(chi_square_sf(x, dof), oracle, 1e-12 + 1e-10 * oracle) << dof << " " << x;
    }
  }
  for (double a : {0.5, 1.5, 4.0, 30.0}) {
    for (double x : {0.1, 1.0, 10.0, 50.0}) {
      EXPECT_NEAR(gamma_q(a, x), boost::math::gamma_q(a, x), 1e-12);
    }
  }
}

TEST(ChiSquareProperty, ScaleCovariantAndMonotone) {
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const std::vector<double> obs = {1.0 + static_cast<double>(rng.below(500)),
                                     1.0 + static_cast<double>(rng.below(500))};
    const std::vector<double> prior = {0.3, 0.7};
    const double base = chi_square(obs, Baseline::kWeighted, prior).chi2;
    for (double k : {2.0, 10.0, 100.0}) {
      const std::vector<double> scaled = {obs[0] * k, obs[1] * k};
      EXPECT_NEAR(chi_square(scaled, Baseline::kWeighted, prior).chi2, k * base,
                  1e-9 * std::max(1.0, k * base));
    }
  }
  double prev = 1.0;
  for (double x = 0.0; x < 60.0; x += 0.25) {
    const double p = chi_square_sf(x, 1);
    EXPECT_LE(p, prev);
    prev = p;
  }
}

TEST(PValue, DisplayRule) {
  EXPECT_EQ(format_p_value(1e-7), "< 0.00001");
  EXPECT_EQ(format_p_value(0.0), "< 0.00001");
  EXPECT_NE(format_p_value(0.05).find("0.05"), std::string::npos);
}

TEST(Reports, RenderAllClasses) {
  const auto m = metrics({31, 66, 69, 934});
  const auto table = metrics_table(m, "SVM Individual");
  EXPECT_NE(table.find("SVM Individual"), std::string::npos);
  const auto json = metrics_json({31, 66, 69, 934}, m, "validation");
  EXPECT_NE(json.find("\"macro_f1\""), std::string::npos);
  const std::vector<double> obs = {90, 10};
  const auto sig = significance_table({chi_square(obs, Baseline::kUniform)}, "SVM");
  EXPECT_NE(sig.find("< 0.00001"), std::string::npos);
}

}  // namespace
}  // namespace mhd::eval
