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

#include <cmath>

#include "fixtures.hpp"
#include "mhd/models.hpp"
#include "mhd/optim.hpp"

namespace mhd::models {
namespace {

using features::SparseVector;
using features::TokenId;
using features::Vocabulary;

TEST(Adam, TwoStepHandTrace) {
  // f(theta) = theta^2 / 2, so the gradient is theta itself.
  Adam opt(1, 0.1);
  std::vector<double> theta = {1.0};
  std::vector<double> g = {theta[0]};
  opt.step(theta, g);
  EXPECT_NEAR(theta[0], 0.900000001, 1e-12);
  g = {theta[0]};
  opt.step(theta, g);
  EXPECT_NEAR(theta[0], 0.8004122297123382, 1e-12);
  EXPECT_NEAR(opt.first_moment()[0], 0.18000000009999995, 1e-15);
  EXPECT_NEAR(opt.second_moment()[0], 0.0018090000018000018, 1e-15);
  EXPECT_EQ(opt.steps(), 2u);
}

TEST(Sgd, PlainStep) {
  Sgd opt(0.5);
  std::vector<double> p = {1.0, -2.0};
  std::vector<double> g = {2.0, 1.0};
  opt.step(p, g);
  EXPECT_EQ(p, (std::vector<double>{0.0, -2.5}));
}

TEST(Sigmoid, DecisionRuleAndRange) {
  EXPECT_EQ(predict_from_score(0.507).label, Label::kDiagnosed);
  EXPECT_EQ(predict_from_score(0.19).label, Label::kControl);
  EXPECT_EQ(predict_from_score(0.5).label, Label::kDiagnosed);
  for (double x : {-1e6, -745.0, -30.0, 0.0, 30.0, 745.0, 1e6}) {
    const double s = sigmoid(x);
    EXPECT_GT(s, 0.0);
    EXPECT_LT(s, 1.0);
  }
  EXPECT_DOUBLE_EQ(sigmoid(0), 0.5);
}

// Tokens "good*" mark Diagnosed and "bad*" mark Control; "n*" is noise.
std::vector<Sample> separable(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Sample> out;
  for (std::size_t i = 0; i < n; ++i) {
    Sample s;
    s.user_id = "u" + std::to_string(i);
    s.label = i % 2 ? Label::kDiagnosed : Label::kControl;
    const std::string mark = s.label == Label::kDiagnosed ? "good" : "bad";
    for (auto k = rng.between(2, 8); k > 0; --k) {
      s.tokens.push_back(rng.below(3) == 0 ? mark + std::to_string(rng.below(3))
                                           : "n" + std::to_string(rng.below(10)));
    }
    s.tokens.push_back(mark + std::to_string(rng.below(3)));
    out.push_back(s);
  }
  return out;
}

double accuracy(const Classifier& m, const std::vector<Sample>& data, const Vocabulary& v) {
  std::size_t ok = 0;
  for (const auto& s : data) ok += m.predict(s.tokens, v).label == s.label;
  return static_cast<double>(ok) / static_cast<double>(data.size());
}

TEST(Svm, SeparableReachesPerfectAccuracy) {
  const auto data = separable(200, 1);
  const auto v = features::build_vocab(data, 1);
  TrainConfig c;
  c.learning_rate = 0.05;
  c.batch_size = 20;
  c.epochs = 30;
  auto m = train(ModelFamily::kSvm, data, v, c);
  EXPECT_EQ(accuracy(*m, data, v), 1.0);
  EXPECT_EQ(accuracy(*m, separable(100, 2), v), 1.0);
}

TEST(Svm, LargeLambdaShrinksWeights) {
  const auto data = separable(100, 3);
  const auto v = features::build_vocab(data, 1);
  TrainConfig c;
  c.learning_rate = 0.05;
  c.epochs = 10;
  c.batch_size = 10;
  c.svm_lambda = 1e6;
  auto ex = to_sparse_examples(data, v);
  auto m = train_svm(ex, v.size(), v.hash(), c);
  double norm = 0;
  for (double w : m.weights()) norm += w * w;
  // Each step moves a weight by at most about lr, then shrinks it by 1e-5.
  EXPECT_LT(std::sqrt(norm), 1e-5);
}

TEST(Training, ZeroLearningRateLeavesParameters) {
  const auto data = separable(60, 4);
  const auto v = features::build_vocab(data, 1);
  TrainConfig c;
  c.learning_rate = 0;
  c.embed_dim = 4;
  c.hidden_dim = 4;
  c.batch_size = 7;
  auto svm = train_svm(to_sparse_examples(data, v), v.size(), v.hash(), c);
  for (double p : svm.params()) EXPECT_EQ(p, 0.0);
  AveplDims dims{v.size(), 4, 4};
  auto avepl = train_avepl(to_id_examples(data, v, c.max_len), dims, v.hash(), c);
  EXPECT_EQ(avepl.params(), EmbeddingPoolModel::initialized(dims, v.hash(), c.seed).params());
}

std::vector<IdExample> random_id_batch(Rng& rng, std::size_t vocab, std::size_t n) {
  std::vector<IdExample> out;
  for (std::size_t i = 0; i < n; ++i) {
    IdExample ex;
    ex.ids.assign(6, features::kPadId);
    const auto len = rng.between(1, 6);
    for (std::int64_t k = 0; k < len; ++k) ex.ids[k] = static_cast<TokenId>(rng.between(1, static_cast<std::int64_t>(vocab) - 1));
    ex.y = static_cast<double>(rng.below(2));
    ex.weight = 0.5 + rng.uniform();
    out.push_back(ex);
  }
  return out;
}

double avepl_loss(const EmbeddingPoolModel& m, std::span<const IdExample> batch) {
  double loss = 0, total = 0;
  for (const auto& ex : batch) {
    const double p = 1.0 / (1.0 + std::exp(-m.logit(ex.ids)));
    loss -= ex.weight * (ex.y * std::log(p) + (1 - ex.y) * std::log(1 - p));
    total += ex.weight;
  }
  return loss / total;
}

TEST(Avepl, GradientMatchesFiniteDifferences) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng(seed * 101);
    AveplDims dims{12, 8, 8};
    auto m = EmbeddingPoolModel::initialized(dims, "h", seed);
    const auto batch = random_id_batch(rng, dims.vocab, 5);
    const Gradient g = avepl_gradient(m, batch);
    EXPECT_NEAR(g.loss, avepl_loss(m, batch), 1e-10);
    const double h = 1e-5;
    double worst = 0;
    for (std::size_t i = 0; i < m.params().size(); ++i) {
      const double saved = m.params()[i];
      m.params()[i] = saved + h;
      const double up = avepl_loss(m, batch);
      m.params()[i] = saved - h;
      const double down = avepl_loss(m, batch);
      m.params()[i] = saved;
      const double numeric = (up - down) / (2 * h);
      const double scale = std::max({std::abs(numeric), std::abs(g.grad[i]), 1e-4});
      worst = std::max(worst, std::abs(numeric - g.grad[i]) / scale);
    }
    EXPECT_LT(worst, 1e-4) << "seed " << seed;
  }
}

TEST(Svm, GradientMatchesHingeDefinition) {
  LinearModel m(5, "h");
  m.params() = {0.3, -0.2, 0.5, 0.0, 0.1, -0.05};
  std::vector<SparseExample> batch = {{{5, {0, 2}}, 1, 2.0}, {{5, {1, 3}}, 0, 1.0},
                                      {{5, {4}}, 1, 1.0}};
  const double lambda = 0.01;
  const Gradient g = svm_gradient(m, batch, lambda);
  // Oracle: weighted hinge over y in {-1, +1}, normalized by total weight.
  std::vector<double> grad(6, 0.0);
  double loss = 0, total = 0;
  for (const auto& ex : batch) {
    const double y = ex.y > 0.5 ? 1.0 : -1.0;
    const double margin = y * m.margin(ex.x);
    total += ex.weight;
    if (margin < 1) {
      loss += ex.weight * (1 - margin);
      for (TokenId j : ex.x.indices) grad[j] -= ex.weight * y;
      grad[5] -= ex.weight * y;
    }
  }
  for (auto& v : grad) v /= total;
  loss /= total;
  for (std::size_t j = 0; j < 5; ++j) {
    loss += lambda * m.params()[j] * m.params()[j];
    grad[j] += 2 * lambda * m.params()[j];
  }
  EXPECT_NEAR(g.loss, loss, 1e-12);
  for (std::size_t j = 0; j < 6; ++j) EXPECT_NEAR(g.grad[j], grad[j], 1e-12);
}

template <typename Ex>
std::pair<std::vector<Ex>, std::vector<Ex>> weighted_and_duplicated(std::vector<Ex> batch) {
  std::vector<Ex> dup;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    batch[i].weight = static_cast<double>(1 + i % 3);
    for (std::size_t k = 0; k < 1 + i % 3; ++k) {
      dup.push_back(batch[i]);
      dup.back().weight = 1.0;
    }
  }
  return {batch, dup};
}

TEST(Weighting, EquivalentToDuplication) {
  Rng rng(9);
  AveplDims dims{10, 4, 4};
  auto am = EmbeddingPoolModel::initialized(dims, "h", 3);
  auto [wa, da] = weighted_and_duplicated(random_id_batch(rng, dims.vocab, 7));
  auto ga = avepl_gradient(am, wa), gda = avepl_gradient(am, da);
  EXPECT_NEAR(ga.loss, gda.loss, 1e-10);
  for (std::size_t i = 0; i < ga.grad.size(); ++i) EXPECT_NEAR(ga.grad[i], gda.grad[i], 1e-10);

  LinearModel lm(6, "h");
  for (auto& p : lm.params()) p = rng.uniform() - 0.5;
  std::vector<SparseExample> sb;
  for (int i = 0; i < 7; ++i) {
    sb.push_back({{6, {static_cast<TokenId>(i % 6)}}, static_cast<double>(i % 2), 1.0});
  }
  auto [ws, ds] = weighted_and_duplicated(sb);
  auto gs = svm_gradient(lm, ws, 0.01), gds = svm_gradient(lm, ds, 0.01);
  EXPECT_NEAR(gs.loss, gds.loss, 1e-10);
  for (std::size_t i = 0; i < gs.grad.size(); ++i) EXPECT_NEAR(gs.grad[i], gds.grad[i], 1e-10);
}

TEST(Avepl, PaddingIsMaskedAndZeroModelIsNeutral) {
  AveplDims dims{20, 8, 8};
  auto m = EmbeddingPoolModel::initialized(dims, "h", 5);
  std::vector<TokenId> ids = {3, 7, 7, 12};
  const double base = m.logit(ids);
  for (int k = 0; k < 10; ++k) {
    ids.push_back(features::kPadId);
    EXPECT_NEAR(m.logit(ids), base, 1e-12);
  }
  EmbeddingPoolModel zero(dims, "h");
  EXPECT_EQ(zero.score(std::vector<TokenId>{1, 2, 3}), 0.5);
  LinearModel lzero(20, "h");
  EXPECT_EQ(lzero.score(SparseVector{20, {1, 4}}), 0.5);
}

TEST(Avepl, LearnsSeparableCorpus) {
  const auto data = separable(400, 6);
  const auto v = features::build_vocab(data, 1);
  TrainConfig c;
  c.learning_rate = 0.01;
  c.batch_size = 32;
  c.epochs = 15;
  c.embed_dim = 16;
  c.hidden_dim = 16;
  auto m = train(ModelFamily::kAvepl, data, v, c);
  const auto held = separable(200, 7);
  // Macro F1 from a direct confusion count.
  double tp[2] = {0, 0}, fp[2] = {0, 0}, fn[2] = {0, 0};
  for (const auto& s : held) {
    const int gold = s.label == Label::kDiagnosed, pred = m->predict(s.tokens, v).label == Label::kDiagnosed;
    if (gold == pred) {
      ++tp[gold];
    } else {
      ++fp[pred];
      ++fn[gold];
    }
  }
  double macro = 0;
  for (int k = 0; k < 2; ++k) macro += 2 * tp[k] / (2 * tp[k] + fp[k] + fn[k]) / 2;
  EXPECT_GE(macro, 0.95);
}

TEST(Classifier, RejectsForeignVocabulary) {
  const auto data = separable(40, 8);
  const auto v = features::build_vocab(data, 1);
  TrainConfig c;
  c.epochs = 1;
  auto m = train(ModelFamily::kSvm, data, v, c);
  auto other = Vocabulary::from_tokens({"x"});
  try {
    m->score_tokens({"x"}, other);
    FAIL() << "expected hash mismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kHashMismatch);
  }
}

TEST(Training, DeterministicUnderSeed) {
  const auto data = separable(80, 10);
  const auto v = features::build_vocab(data, 1);
  TrainConfig c;
  c.epochs = 3;
  c.batch_size = 16;
  c.embed_dim = 4;
  c.hidden_dim = 4;
  for (auto fam : {ModelFamily::kSvm, ModelFamily::kAvepl}) {
    auto a = train(fam, data, v, c), b = train(fam, data, v, c);
    EXPECT_EQ(serialize_model(*a, c), serialize_model(*b, c));
    c.seed = 7;
    EXPECT_NE(serialize_model(*train(fam, data, v, c), c), serialize_model(*a, c));
    c.seed = 42;
  }
  c.learning_rate = -1;
  EXPECT_THROW(train(ModelFamily::kSvm, data, v, c), Error);
}

TEST(ModelFile, RoundTripsExactly) {
  Rng rng(12);
  TrainConfig c;
  for (int i = 0; i < 100; ++i) {
    std::unique_ptr<Classifier> m;
    if (i % 2) {
      auto lm = std::make_unique<LinearModel>(static_cast<std::size_t>(rng.between(2, 30)), "h" + std::to_string(i));
      for (auto& p : lm->params()) p = (rng.uniform() - 0.5) * std::pow(10.0, rng.between(-8, 3));
      m = std::move(lm);
    } else {
      AveplDims d{static_cast<std::size_t>(rng.between(2, 10)), static_cast<std::size_t>(rng.between(1, 4)),
                  static_cast<std::size_t>(rng.between(1, 4))};
      auto am = std::make_unique<EmbeddingPoolModel>(EmbeddingPoolModel::initialized(d, "h", i));
      am->set_max_len(static_cast<std::size_t>(rng.between(1, 70)));
      m = std::move(am);
    }
    const std::string text = serialize_model(*m, c);
    auto back = parse_model(text);
    EXPECT_EQ(serialize_model(*back.model, c), text);
    EXPECT_EQ(back.id, model_id(*m));
    EXPECT_EQ(back.model->vocab_hash(), m->vocab_hash());
  }
}

TEST(ModelFile, CorruptionIsDetected) {
  LinearModel m(4, "h");
  m.params() = {0.25, -0.5, 1.0, 0.125, 0.0};
  std::string text = serialize_model(m, TrainConfig{});
  const auto at = text.find("\"params\":[");
  ASSERT_NE(at, std::string::npos);
  text.insert(at + 10, "1");
  try {
    parse_model(text);
    FAIL() << "expected parse error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
  }
  EXPECT_THROW(parse_model("{"), Error);
  testing::TempDir dir("models");
  EXPECT_THROW(load_model(dir.file("absent.json")), Error);
}

}  // namespace
}  // namespace mhd::models
