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

#include <bit>
#include <cstring>

#include "json.hpp"
#include "mhd/models.hpp"

namespace mhd::models {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

constexpr const char* kFormat = "mhd-model";
constexpr int kVersion = 1;

std::span<const double> params_of(const Classifier& model) {
  if (model.family() == ModelFamily::kSvm) {
    return static_cast<const LinearModel&>(model).params();
  }
  return static_cast<const EmbeddingPoolModel&>(model).params();
}

ojson config_object(const TrainConfig& c) {
  ojson j;
  j["learning_rate"] = c.learning_rate;
  j["batch_size"] = c.batch_size;
  j["epochs"] = c.epochs;
  j["optimizer"] = optimizer_name(c.optimizer);
  j["beta1"] = c.beta1;
  j["beta2"] = c.beta2;
  j["epsilon"] = c.epsilon;
  j["seed"] = c.seed;
  j["svm_lambda"] = c.svm_lambda;
  j["embed_dim"] = c.embed_dim;
  j["hidden_dim"] = c.hidden_dim;
  j["max_len"] = c.max_len;
  return j;
}

}  // namespace

std::string params_checksum(std::span<const double> params) {
  std::string bytes;
  bytes.reserve(params.size() * 8);
  for (double v : params) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    for (int k = 0; k < 8; ++k) bytes.push_back(static_cast<char>((bits >> (8 * k)) & 0xff));
  }
  return sha256_hex(bytes);
}

std::string model_id(const Classifier& model) {
  return std::string(family_name(model.family())) + "-" +
         params_checksum(params_of(model)).substr(0, 8);
}

std::string train_config_json(const TrainConfig& config) { return config_object(config).dump(); }

std::string serialize_model(const Classifier& model, const TrainConfig& config) {
  ojson j;
  j["format"] = kFormat;
  j["version"] = kVersion;
  j["family"] = family_name(model.family());
  j["vocab_hash"] = model.vocab_hash();
  j["config"] = config_object(config);
  ojson dims;
  if (model.family() == ModelFamily::kSvm) {
    dims["vocab"] = static_cast<const LinearModel&>(model).dimension();
  } else {
    const auto& m = static_cast<const EmbeddingPoolModel&>(model);
    dims["vocab"] = m.dims().vocab;
    dims["embed"] = m.dims().embed;
    dims["hidden"] = m.dims().hidden;
    dims["max_len"] = m.max_len();
  }
  j["dims"] = std::move(dims);
  auto params = params_of(model);
  j["params_sha256"] = params_checksum(params);
  j["params"] = std::vector<double>(params.begin(), params.end());
  return j.dump() + "\n";
}

void save_model(const Classifier& model, const TrainConfig& config, const std::string& path) {
  write_file(path, serialize_model(model, config));
}

LoadedModel parse_model(std::string_view contents) {
  json j;
  try {
    j = json::parse(contents);
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse, std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != kFormat) {
      fail(ErrorCode::kParse, "not an mhd model file");
    }
    if (j.at("version").get<int>() != kVersion) {
      fail(ErrorCode::kParse, "unsupported model file version " +
                                  std::to_string(j.at("version").get<int>()));
    }
    const ModelFamily family = parse_family(j.at("family").get<std::string>());
    const std::string vocab_hash = j.at("vocab_hash").get<std::string>();
    const auto params = j.at("params").get<std::vector<double>>();
    if (params_checksum(params) != j.at("params_sha256").get<std::string>()) {
      fail(ErrorCode::kParse, "model parameter checksum mismatch (corrupted file)");
    }
    const json& dims = j.at("dims");
    LoadedModel out;
    out.config_json = j.at("config").dump();
    if (family == ModelFamily::kSvm) {
      auto m = std::make_unique<LinearModel>(dims.at("vocab").get<std::size_t>(), vocab_hash);
      if (m->params().size() != params.size()) {
        fail(ErrorCode::kParse, "model parameter count does not match dimensions");
      }
      m->params() = params;
      out.model = std::move(m);
    } else {
      AveplDims d{dims.at("vocab").get<std::size_t>(), dims.at("embed").get<std::size_t>(),
                  dims.at("hidden").get<std::size_t>()};
      auto m = std::make_unique<EmbeddingPoolModel>(d, vocab_hash);
      if (m->params().size() != params.size()) {
        fail(ErrorCode::kParse, "model parameter count does not match dimensions");
      }
      m->params() = params;
      m->set_max_len(dims.at("max_len").get<std::size_t>());
      out.model = std::move(m);
    }
    out.id = model_id(*out.model);
    return out;
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse, std::string("malformed model file: ") + e.what());
  }
}

LoadedModel load_model(const std::string& path) {
  try {
    return parse_model(read_file(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParse) {
      fail(ErrorCode::kParse, "'" + path + "': " + e.what());
    }
    throw;
  }
}

}  // namespace mhd::models
