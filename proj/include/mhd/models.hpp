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

#ifndef MHD_MODELS_HPP_
#define MHD_MODELS_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mhd/features.hpp"
#include "mhd/sampling.hpp"

namespace mhd::models {

enum class ModelFamily { kSvm, kAvepl };
enum class OptimizerKind { kAdam, kSgd };

const char* family_name(ModelFamily f);
ModelFamily parse_family(std::string_view name);
const char* optimizer_name(OptimizerKind o);
OptimizerKind parse_optimizer(std::string_view name);

struct TrainConfig {
  double learning_rate = 0.01;
  std::size_t batch_size = 1000;
  std::size_t epochs = 1;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t seed = 42;
  double svm_lambda = 1e-4;
  std::size_t embed_dim = 64;
  std::size_t hidden_dim = 64;
  std::size_t max_len = features::kDefaultMaxLen;

  void validate() const;
};

struct Prediction {
  double score = 0.5;
  Label label = Label::kDiagnosed;
};

// The decision boundary sits at 0.5, inclusive on the Diagnosed side.
Prediction predict_from_score(double score);

// Numerically stable logistic function, clamped into the open interval.
double sigmoid(double x);

// Common surface over trained model families.
class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual ModelFamily family() const = 0;
  virtual const std::string& vocab_hash() const = 0;
  // Encodes the tokens with `vocab` and scores them. Throws kHashMismatch
  // when `vocab` is not the one the model was trained against.
  virtual double score_tokens(const text::TokenSeq& tokens,
                              const features::Vocabulary& vocab) const = 0;

  Prediction predict(const text::TokenSeq& tokens, const features::Vocabulary& vocab) const {
    return predict_from_score(score_tokens(tokens, vocab));
  }

 protected:
  void check_vocab(const features::Vocabulary& vocab) const;
};

// ---------------------------------------------------------------------------
// Linear SVM over many-hot inputs.

class LinearModel final : public Classifier {
 public:
  LinearModel(std::size_t dimension, std::string vocab_hash);

  std::size_t dimension() const { return params_.size() - 1; }
  std::span<double> weights() { return {params_.data(), dimension()}; }
  std::span<const double> weights() const { return {params_.data(), dimension()}; }
  double& bias() { return params_.back(); }
  double bias() const { return params_.back(); }
  // Weights followed by the bias.
  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }

  double margin(const features::SparseVector& x) const;
  double score(const features::SparseVector& x) const { return sigmoid(margin(x)); }

  ModelFamily family() const override { return ModelFamily::kSvm; }
  const std::string& vocab_hash() const override { return vocab_hash_; }
  double score_tokens(const text::TokenSeq& tokens,
                      const features::Vocabulary& vocab) const override;

 private:
  std::vector<double> params_;
  std::string vocab_hash_;
};

struct SparseExample {
  features::SparseVector x;
  double y = 0;  // 0 = Control, 1 = Diagnosed
  double weight = 1.0;
};

struct Gradient {
  double loss = 0;
  std::vector<double> grad;  // same layout as the model's params()
};

// Weighted hinge loss normalized by the total weight, plus lambda*|w|^2.
// At margin exactly 1 the zero subgradient is used.
Gradient svm_gradient(const LinearModel& model, std::span<const SparseExample> batch,
                      double lambda);

// Seeded mini-batch subgradient descent. The L2 term is applied as a
// proximal shrink after each step so arbitrarily large lambda stays stable.
LinearModel train_svm(std::span<const SparseExample> data, std::size_t dimension,
                      const std::string& vocab_hash, const TrainConfig& config);

// ---------------------------------------------------------------------------
// Embedding -> masked average pool -> 3 x (affine + ReLU) -> affine -> sigmoid.

struct AveplDims {
  std::size_t vocab = 0;
  std::size_t embed = 64;
  std::size_t hidden = 64;

  std::size_t param_count() const;
  bool operator==(const AveplDims&) const = default;
};

class EmbeddingPoolModel final : public Classifier {
 public:
  // All parameters zero.
  EmbeddingPoolModel(AveplDims dims, std::string vocab_hash);
  // Uniform(+-1/sqrt(fan_in)) per layer; the embedding lookup has fan-in 1.
  static EmbeddingPoolModel initialized(AveplDims dims, std::string vocab_hash,
                                        std::uint64_t seed);

  const AveplDims& dims() const { return dims_; }
  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }

  // Parameter blocks, row-major.
  std::span<double> embedding() { return block(0); }
  std::span<double> fc_weight(int layer) { return block(1 + 2 * layer); }
  std::span<double> fc_bias(int layer) { return block(2 + 2 * layer); }
  std::span<double> out_weight() { return block(7); }
  double& out_bias() { return params_.back(); }
  // Start of block i in params(): 0 embedding, 1/2 fc1 W/b, 3/4 fc2,
  // 5/6 fc3, 7 output weight, 8 output bias.
  std::size_t offset(int i) const;

  double logit(std::span<const features::TokenId> ids) const;
  double score(std::span<const features::TokenId> ids) const { return sigmoid(logit(ids)); }

  std::size_t max_len() const { return max_len_; }
  void set_max_len(std::size_t n) { max_len_ = n; }

  ModelFamily family() const override { return ModelFamily::kAvepl; }
  const std::string& vocab_hash() const override { return vocab_hash_; }
  double score_tokens(const text::TokenSeq& tokens,
                      const features::Vocabulary& vocab) const override;

 private:
  std::span<double> block(int i);

  AveplDims dims_;
  std::vector<double> params_;
  std::string vocab_hash_;
  std::size_t max_len_ = features::kDefaultMaxLen;
};

struct IdExample {
  std::vector<features::TokenId> ids;
  double y = 0;
  double weight = 1.0;
};

// Weighted binary cross-entropy on the sigmoid output, normalized by the
// total weight, with its analytic gradient.
Gradient avepl_gradient(const EmbeddingPoolModel& model, std::span<const IdExample> batch);

EmbeddingPoolModel train_avepl(std::span<const IdExample> data, AveplDims dims,
                               const std::string& vocab_hash, const TrainConfig& config);

// ---------------------------------------------------------------------------
// Convenience wrappers over samples.

std::vector<SparseExample> to_sparse_examples(const std::vector<Sample>& samples,
                                              const features::Vocabulary& vocab);
std::vector<IdExample> to_id_examples(const std::vector<Sample>& samples,
                                      const features::Vocabulary& vocab, std::size_t max_len);

// Trains the requested family on labeled, weighted samples.
std::unique_ptr<Classifier> train(ModelFamily family, const std::vector<Sample>& train,
                                  const features::Vocabulary& vocab, const TrainConfig& config);

// ---------------------------------------------------------------------------
// Model files: JSON container with format version, config echo, vocabulary
// hash, parameter checksum and parameters.

struct LoadedModel {
  std::unique_ptr<Classifier> model;
  std::string id;           // "<family>-<first 8 hex of checksum>"
  std::string config_json;  // echo of the training config
};

std::string params_checksum(std::span<const double> params);
std::string model_id(const Classifier& model);

std::string serialize_model(const Classifier& model, const TrainConfig& config);
void save_model(const Classifier& model, const TrainConfig& config, const std::string& path);
LoadedModel parse_model(std::string_view contents);
LoadedModel load_model(const std::string& path);

std::string train_config_json(const TrainConfig& config);

}  // namespace mhd::models

#endif  // MHD_MODELS_HPP_
