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

#include "mhd/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mhd/optim.hpp"

namespace mhd::models {

using features::SparseVector;
using features::TokenId;

const char* family_name(ModelFamily f) { return f == ModelFamily::kSvm ? "svm" : "avepl"; }

ModelFamily parse_family(std::string_view name) {
  if (name == "svm") return ModelFamily::kSvm;
  if (name == "avepl") return ModelFamily::kAvepl;
  fail(ErrorCode::kInvalidArgument, "unknown model family '" + std::string(name) + "'");
}

const char* optimizer_name(OptimizerKind o) { return o == OptimizerKind::kAdam ? "adam" : "sgd"; }

OptimizerKind parse_optimizer(std::string_view name) {
  if (name == "adam") return OptimizerKind::kAdam;
  if (name == "sgd") return OptimizerKind::kSgd;
  fail(ErrorCode::kInvalidArgument, "unknown optimizer '" + std::string(name) + "'");
}

void TrainConfig::validate() const {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    fail(ErrorCode::kInvalidArgument, "learning_rate must be finite and >= 0");
  }
  if (batch_size < 1) fail(ErrorCode::kInvalidArgument, "batch_size must be >= 1");
  if (epochs < 1) fail(ErrorCode::kInvalidArgument, "epochs must be >= 1");
  if (!(beta1 >= 0 && beta1 < 1 && beta2 >= 0 && beta2 < 1 && epsilon > 0)) {
    fail(ErrorCode::kInvalidArgument, "Adam constants out of range");
  }
  if (!(svm_lambda >= 0) || !std::isfinite(svm_lambda)) {
    fail(ErrorCode::kInvalidArgument, "svm_lambda must be finite and >= 0");
  }
  if (embed_dim < 1 || hidden_dim < 1 || max_len < 1) {
    fail(ErrorCode::kInvalidArgument, "embed_dim, hidden_dim and max_len must be >= 1");
  }
}

double sigmoid(double x) {
  constexpr double kLo = 1e-15;
  constexpr double kHi = 1.0 - 1e-15;
  double s = x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
  return std::clamp(s, kLo, kHi);
}

Prediction predict_from_score(double score) {
  return Prediction{score, score >= 0.5 ? Label::kDiagnosed : Label::kControl};
}

void Classifier::check_vocab(const features::Vocabulary& vocab) const {
  if (vocab.hash() != vocab_hash()) {
    fail(ErrorCode::kHashMismatch, "vocabulary hash " + vocab.hash().substr(0, 12) +
                                       " does not match model's " +
                                       vocab_hash().substr(0, 12));
  }
}

namespace {

double raw_sigmoid(double x) {
  return x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

void check_finite(const Gradient& g, const char* what, std::size_t epoch, std::size_t batch) {
  bool ok = std::isfinite(g.loss);
  for (double v : g.grad) ok = ok && std::isfinite(v);
  if (!ok) {
    fail(ErrorCode::kNumeric, std::string(what) + ": non-finite loss or gradient at epoch " +
                                  std::to_string(epoch) + ", batch " + std::to_string(batch));
  }
}

std::unique_ptr<Optimizer> make_optimizer(const TrainConfig& config, std::size_t n) {
  if (config.optimizer == OptimizerKind::kSgd) return std::make_unique<Sgd>(config.learning_rate);
  return std::make_unique<Adam>(n, config.learning_rate, config.beta1, config.beta2,
                                config.epsilon);
}

template <typename Example>
void require_both_classes(std::span<const Example> data, const char* what) {
  bool pos = false, neg = false;
  for (const auto& e : data) {
    if (e.y == 1.0) pos = true;
    else if (e.y == 0.0) neg = true;
    else fail(ErrorCode::kInvalidArgument, std::string(what) + ": labels must be 0 or 1");
    if (!(e.weight > 0) || !std::isfinite(e.weight)) {
      fail(ErrorCode::kInvalidArgument, std::string(what) + ": weights must be positive");
    }
  }
  if (!pos || !neg) fail(ErrorCode::kInvalidArgument, std::string(what) + ": both classes required");
}

// Seeded shuffled mini-batches over `n` examples; `step` receives the
// batch's example indices.
template <typename Step>
void for_each_batch(std::size_t n, const TrainConfig& config, Step step) {
  std::vector<std::size_t> order(n);
  for (std::size_t e = 0; e < config.epochs; ++e) {
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    Rng rng(derive_seed(config.seed, "epoch-" + std::to_string(e)));
    rng.shuffle(order);
    std::size_t batch_no = 0;
    for (std::size_t start = 0; start < n; start += config.batch_size, ++batch_no) {
      std::size_t end = std::min(n, start + config.batch_size);
      step(std::span<const std::size_t>(order.data() + start, end - start), e, batch_no);
    }
  }
}

// Data term of the SVM objective over examples picked by `idx`.
template <typename Pick>
Gradient hinge_gradient(const LinearModel& model, std::size_t count, Pick pick) {
  const std::size_t dim = model.dimension();
  Gradient g;
  g.grad.assign(dim + 1, 0.0);
  double total = 0;
  for (std::size_t i = 0; i < count; ++i) total += pick(i).weight;
  if (!(total > 0)) fail(ErrorCode::kInvalidArgument, "svm: empty batch");
  for (std::size_t i = 0; i < count; ++i) {
    const SparseExample& ex = pick(i);
    const double sign = ex.y > 0.5 ? 1.0 : -1.0;
    const double m = sign * model.margin(ex.x);
    const double c = ex.weight / total;
    if (m < 1.0) {
      g.loss += c * (1.0 - m);
      for (TokenId j : ex.x.indices) g.grad[j] -= c * sign;
      g.grad[dim] -= c * sign;
    }
  }
  return g;
}

struct Activations {
  std::vector<double> pooled;
  std::vector<double> z[3];
  std::vector<double> a[3];
  std::size_t count = 0;
  double logit = 0;
};

void forward(const EmbeddingPoolModel& model, std::span<const TokenId> ids, Activations& act) {
  const AveplDims& d = model.dims();
  const double* p = model.params().data();
  act.pooled.assign(d.embed, 0.0);
  act.count = 0;
  for (TokenId id : ids) {
    if (id == features::kPadId) continue;
    if (id >= d.vocab) {
      fail(ErrorCode::kInvalidArgument, "token id " + std::to_string(id) +
                                            " outside model vocabulary of size " +
                                            std::to_string(d.vocab));
    }
    const double* row = p + model.offset(0) + static_cast<std::size_t>(id) * d.embed;
    for (std::size_t j = 0; j < d.embed; ++j) act.pooled[j] += row[j];
    ++act.count;
  }
  if (act.count > 0) {
    const double inv = 1.0 / static_cast<double>(act.count);
    for (auto& v : act.pooled) v *= inv;
  }
  const std::vector<double>* in = &act.pooled;
  std::size_t in_dim = d.embed;
  for (int layer = 0; layer < 3; ++layer) {
    const double* w = p + model.offset(1 + 2 * layer);
    const double* b = p + model.offset(2 + 2 * layer);
    auto& z = act.z[layer];
    auto& a = act.a[layer];
    z.assign(d.hidden, 0.0);
    a.assign(d.hidden, 0.0);
    for (std::size_t k = 0; k < d.hidden; ++k) {
      double s = b[k];
      const double* wk = w + k * in_dim;
      for (std::size_t j = 0; j < in_dim; ++j) s += wk[j] * (*in)[j];
      z[k] = s;
      a[k] = s > 0 ? s : 0.0;
    }
    in = &a;
    in_dim = d.hidden;
  }
  const double* wo = p + model.offset(7);
  double s = p[model.offset(8)];
  for (std::size_t k = 0; k < d.hidden; ++k) s += wo[k] * act.a[2][k];
  act.logit = s;
}

template <typename Pick>
Gradient bce_gradient(const EmbeddingPoolModel& model, std::size_t count, Pick pick) {
  const AveplDims& d = model.dims();
  const double* p = model.params().data();
  Gradient g;
  g.grad.assign(model.params().size(), 0.0);
  double total = 0;
  for (std::size_t i = 0; i < count; ++i) total += pick(i).weight;
  if (!(total > 0)) fail(ErrorCode::kInvalidArgument, "avepl: empty batch");

  Activations act;
  std::vector<double> delta(d.hidden), prev(std::max(d.hidden, d.embed));
  double* gr = g.grad.data();
  for (std::size_t i = 0; i < count; ++i) {
    const IdExample& ex = pick(i);
    forward(model, ex.ids, act);
    const double c = ex.weight / total;
    g.loss += c * (softplus(act.logit) - ex.y * act.logit);
    const double g_logit = c * (raw_sigmoid(act.logit) - ex.y);

    const double* wo = p + model.offset(7);
    double* g_wo = gr + model.offset(7);
    for (std::size_t k = 0; k < d.hidden; ++k) {
      g_wo[k] += g_logit * act.a[2][k];
      delta[k] = act.z[2][k] > 0 ? g_logit * wo[k] : 0.0;
    }
    gr[model.offset(8)] += g_logit;

    for (int layer = 2; layer >= 0; --layer) {
      const std::size_t in_dim = layer == 0 ? d.embed : d.hidden;
      const std::vector<double>& input = layer == 0 ? act.pooled : act.a[layer - 1];
      const double* w = p + model.offset(1 + 2 * layer);
      double* gw = gr + model.offset(1 + 2 * layer);
      double* gb = gr + model.offset(2 + 2 * layer);
      std::fill(prev.begin(), prev.begin() + static_cast<std::ptrdiff_t>(in_dim), 0.0);
      for (std::size_t k = 0; k < d.hidden; ++k) {
        const double dk = delta[k];
        if (dk == 0.0) continue;
        gb[k] += dk;
        const double* wk = w + k * in_dim;
        double* gwk = gw + k * in_dim;
        for (std::size_t j = 0; j < in_dim; ++j) {
          gwk[j] += dk * input[j];
          prev[j] += wk[j] * dk;
        }
      }
      if (layer > 0) {
        for (std::size_t j = 0; j < d.hidden; ++j) {
          delta[j] = act.z[layer - 1][j] > 0 ? prev[j] : 0.0;
        }
      }
    }
    if (act.count == 0) continue;
    const double inv = 1.0 / static_cast<double>(act.count);
    for (TokenId id : ex.ids) {
      if (id == features::kPadId) continue;
      double* ge = gr + model.offset(0) + static_cast<std::size_t>(id) * d.embed;
      for (std::size_t j = 0; j < d.embed; ++j) ge[j] += prev[j] * inv;
    }
  }
  return g;
}

}  // namespace

// ---------------------------------------------------------------------------

LinearModel::LinearModel(std::size_t dimension, std::string vocab_hash)
    : params_(dimension + 1, 0.0), vocab_hash_(std::move(vocab_hash)) {}

double LinearModel::margin(const SparseVector& x) const {
  if (x.dimension != dimension()) {
    fail(ErrorCode::kInvalidArgument, "input dimension " + std::to_string(x.dimension) +
                                          " does not match model dimension " +
                                          std::to_string(dimension()));
  }
  double s = bias();
  for (TokenId j : x.indices) s += params_[j];
  return s;
}

double LinearModel::score_tokens(const text::TokenSeq& tokens,
                                 const features::Vocabulary& vocab) const {
  check_vocab(vocab);
  return score(features::encode_manyhot(tokens, vocab));
}

Gradient svm_gradient(const LinearModel& model, std::span<const SparseExample> batch,
                      double lambda) {
  Gradient g = hinge_gradient(model, batch.size(),
                              [&](std::size_t i) -> const SparseExample& { return batch[i]; });
  auto w = model.weights();
  for (std::size_t j = 0; j < w.size(); ++j) {
    g.loss += lambda * w[j] * w[j];
    g.grad[j] += 2.0 * lambda * w[j];
  }
  return g;
}

LinearModel train_svm(std::span<const SparseExample> data, std::size_t dimension,
                      const std::string& vocab_hash, const TrainConfig& config) {
  config.validate();
  require_both_classes(data, "train_svm");
  for (const auto& ex : data) {
    if (ex.x.dimension != dimension) {
      fail(ErrorCode::kInvalidArgument, "train_svm: example dimension mismatch");
    }
  }
  LinearModel model(dimension, vocab_hash);
  auto opt = make_optimizer(config, model.params().size());
  const double shrink = 1.0 / (1.0 + 2.0 * config.learning_rate * config.svm_lambda);
  for_each_batch(data.size(), config,
                 [&](std::span<const std::size_t> idx, std::size_t epoch, std::size_t batch) {
                   Gradient g = hinge_gradient(model, idx.size(),
                                               [&](std::size_t i) -> const SparseExample& {
                                                 return data[idx[i]];
                                               });
                   check_finite(g, "train_svm", epoch, batch);
                   opt->step(model.params(), g.grad);
                   for (double& w : model.weights()) w *= shrink;
                 });
  for (double v : model.params()) {
    if (!std::isfinite(v)) fail(ErrorCode::kNumeric, "train_svm: non-finite parameters");
  }
  return model;
}

// ---------------------------------------------------------------------------

std::size_t AveplDims::param_count() const {
  return vocab * embed + hidden * embed + hidden + 2 * (hidden * hidden + hidden) + hidden + 1;
}

EmbeddingPoolModel::EmbeddingPoolModel(AveplDims dims, std::string vocab_hash)
    : dims_(dims), params_(dims.param_count(), 0.0), vocab_hash_(std::move(vocab_hash)) {
  if (dims.vocab < 2 || dims.embed < 1 || dims.hidden < 1) {
    fail(ErrorCode::kInvalidArgument, "invalid AVEPL dimensions");
  }
}

std::size_t EmbeddingPoolModel::offset(int i) const {
  const std::size_t e = dims_.embed, h = dims_.hidden;
  const std::size_t sizes[] = {dims_.vocab * e, h * e, h, h * h, h, h * h, h, h, 1};
  std::size_t off = 0;
  for (int k = 0; k < i; ++k) off += sizes[k];
  return off;
}

std::span<double> EmbeddingPoolModel::block(int i) {
  return {params_.data() + offset(i), offset(i + 1) - offset(i)};
}

EmbeddingPoolModel EmbeddingPoolModel::initialized(AveplDims dims, std::string vocab_hash,
                                                   std::uint64_t seed) {
  EmbeddingPoolModel m(dims, std::move(vocab_hash));
  Rng rng(derive_seed(seed, "avepl-init"));
  auto fill = [&](std::span<double> block, double fan_in) {
    const double bound = 1.0 / std::sqrt(fan_in);
    for (double& v : block) v = (2.0 * rng.uniform() - 1.0) * bound;
  };
  fill(m.embedding(), 1.0);
  const double h = static_cast<double>(dims.hidden);
  fill(m.fc_weight(0), static_cast<double>(dims.embed));
  fill(m.fc_bias(0), static_cast<double>(dims.embed));
  for (int layer = 1; layer < 3; ++layer) {
    fill(m.fc_weight(layer), h);
    fill(m.fc_bias(layer), h);
  }
  fill(m.out_weight(), h);
  fill(std::span<double>(&m.out_bias(), 1), h);
  // <pad> is masked out of the pool; keep its row at zero.
  std::fill_n(m.embedding().begin(), dims.embed, 0.0);
  return m;
}

double EmbeddingPoolModel::logit(std::span<const TokenId> ids) const {
  Activations act;
  forward(*this, ids, act);
  return act.logit;
}

double EmbeddingPoolModel::score_tokens(const text::TokenSeq& tokens,
                                        const features::Vocabulary& vocab) const {
  check_vocab(vocab);
  return score(features::encode_ids(tokens, vocab, max_len_));
}

Gradient avepl_gradient(const EmbeddingPoolModel& model, std::span<const IdExample> batch) {
  return bce_gradient(model, batch.size(),
                      [&](std::size_t i) -> const IdExample& { return batch[i]; });
}

EmbeddingPoolModel train_avepl(std::span<const IdExample> data, AveplDims dims,
                               const std::string& vocab_hash, const TrainConfig& config) {
  config.validate();
  require_both_classes(data, "train_avepl");
  for (const auto& ex : data) {
    for (TokenId id : ex.ids) {
      if (id >= dims.vocab) {
        fail(ErrorCode::kInvalidArgument,
             "train_avepl: token id outside vocabulary (vocabulary mismatch)");
      }
    }
  }
  EmbeddingPoolModel model = EmbeddingPoolModel::initialized(dims, vocab_hash, config.seed);
  model.set_max_len(config.max_len);
  auto opt = make_optimizer(config, model.params().size());
  for_each_batch(data.size(), config,
                 [&](std::span<const std::size_t> idx, std::size_t epoch, std::size_t batch) {
                   Gradient g = bce_gradient(model, idx.size(),
                                             [&](std::size_t i) -> const IdExample& {
                                               return data[idx[i]];
                                             });
                   check_finite(g, "train_avepl", epoch, batch);
                   opt->step(model.params(), g.grad);
                 });
  for (double v : model.params()) {
    if (!std::isfinite(v)) fail(ErrorCode::kNumeric, "train_avepl: non-finite parameters");
  }
  return model;
}

// ---------------------------------------------------------------------------

namespace {

double label_value(const Sample& s) {
  if (s.label == Label::kUnknown) {
    fail(ErrorCode::kInvalidArgument, "training sample for user '" + s.user_id + "' has no label");
  }
  return s.label == Label::kDiagnosed ? 1.0 : 0.0;
}

}  // namespace

std::vector<SparseExample> to_sparse_examples(const std::vector<Sample>& samples,
                                              const features::Vocabulary& vocab) {
  std::vector<SparseExample> out;
  out.reserve(samples.size());
  for (const auto& s : samples) {
    out.push_back({features::encode_manyhot(s.tokens, vocab), label_value(s), s.weight});
  }
  return out;
}

std::vector<IdExample> to_id_examples(const std::vector<Sample>& samples,
                                      const features::Vocabulary& vocab, std::size_t max_len) {
  std::vector<IdExample> out;
  out.reserve(samples.size());
  for (const auto& s : samples) {
    out.push_back({features::encode_ids(s.tokens, vocab, max_len), label_value(s), s.weight});
  }
  return out;
}

std::unique_ptr<Classifier> train(ModelFamily family, const std::vector<Sample>& train,
                                  const features::Vocabulary& vocab, const TrainConfig& config) {
  if (family == ModelFamily::kSvm) {
    auto data = to_sparse_examples(train, vocab);
    return std::make_unique<LinearModel>(train_svm(data, vocab.size(), vocab.hash(), config));
  }
  auto data = to_id_examples(train, vocab, config.max_len);
  AveplDims dims{vocab.size(), config.embed_dim, config.hidden_dim};
  return std::make_unique<EmbeddingPoolModel>(train_avepl(data, dims, vocab.hash(), config));
}

}  // namespace mhd::models
