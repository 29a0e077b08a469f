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

#include "mhd/mhd.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "json.hpp"
#include "mhd/corpus.hpp"
#include "mhd/eval.hpp"
#include "mhd/features.hpp"
#include "mhd/models.hpp"
#include "mhd/pipeline.hpp"
#include "mhd/preprocess.hpp"

struct mhd_corpus {
  mhd::TweetStore store;
};

struct mhd_classifier {
  mhd::models::LoadedModel model;
  mhd::features::Vocabulary vocab;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_error_json = "{}";

mhd_status record(mhd::ErrorCode code, const std::string& message,
                  const std::vector<std::string>* tweet_ids = nullptr) {
  g_error = message;
  nlohmann::ordered_json j;
  j["status"] = static_cast<int>(code);
  j["error"] = mhd::error_code_name(code);
  j["message"] = message;
  if (tweet_ids != nullptr) j["tweet_ids"] = *tweet_ids;
  g_error_json = j.dump();
  return static_cast<mhd_status>(code);
}

// Runs `fn`, translating exceptions into status codes.
template <typename Fn>
mhd_status guarded(Fn&& fn) {
  g_error.clear();
  g_error_json = "{}";
  try {
    fn();
    return MHD_OK;
  } catch (const mhd::MissingAnnotationError& e) {
    return record(e.code(), e.what(), &e.tweet_ids());
  } catch (const mhd::Error& e) {
    return record(e.code(), e.what());
  } catch (const std::bad_alloc&) {
    return record(mhd::ErrorCode::kInternal, "out of memory");
  } catch (const std::exception& e) {
    return record(mhd::ErrorCode::kInternal, e.what());
  } catch (...) {
    return record(mhd::ErrorCode::kInternal, "unknown failure");
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) mhd::fail(mhd::ErrorCode::kInvalidArgument, std::string(what) + " is null");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

MHD_API const char* mhd_version(void) { return mhd::pipeline::kVersion; }

MHD_API const char* mhd_status_string(mhd_status status) {
  if (status == MHD_OK) return "ok";
  if (status < MHD_ERR_INVALID_ARGUMENT || status > MHD_ERR_INTERNAL) return "unknown";
  return mhd::error_code_name(static_cast<mhd::ErrorCode>(status));
}

MHD_API const char* mhd_last_error(void) { return g_error.c_str(); }

MHD_API const char* mhd_last_error_json(void) { return g_error_json.c_str(); }

MHD_API void mhd_string_free(char* s) { std::free(s); }

MHD_API mhd_status mhd_run_stage(const char* stage, const char* config_json, const char* out_dir,
                                 char** manifest_json) {
  return guarded([&] {
    require(stage, "stage");
    require(out_dir, "out_dir");
    auto r = mhd::pipeline::run_stage(stage, config_json ? config_json : "{}", out_dir);
    if (manifest_json != nullptr) *manifest_json = dup(r.manifest);
  });
}

MHD_API mhd_status mhd_rerun(const char* manifest_path, const char* out_dir,
                             char** manifest_json) {
  return guarded([&] {
    require(manifest_path, "manifest_path");
    auto r = mhd::pipeline::rerun(manifest_path, out_dir ? out_dir : "");
    if (manifest_json != nullptr) *manifest_json = dup(r.manifest);
  });
}

MHD_API mhd_status mhd_config_from_file(const char* path, char** config_json) {
  return guarded([&] {
    require(path, "path");
    require(config_json, "config_json");
    *config_json = dup(mhd::pipeline::config_from_file(path));
  });
}

MHD_API mhd_status mhd_normalize_text(const char* text, char** tokens) {
  return guarded([&] {
    require(text, "text");
    require(tokens, "tokens");
    std::string out;
    for (const auto& t : mhd::text::normalize(text)) out += t + "\n";
    *tokens = dup(out);
  });
}

MHD_API mhd_status mhd_corpus_load(const char* path, mhd_corpus** out, size_t* n_rejected) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    auto loaded = mhd::corpus::load_corpus(path);
    if (n_rejected != nullptr) *n_rejected = loaded.rejects.size();
    *out = new mhd_corpus{std::move(loaded.store)};
  });
}

MHD_API size_t mhd_corpus_size(const mhd_corpus* corpus) {
  return corpus == nullptr ? 0 : corpus->store.size();
}

MHD_API void mhd_corpus_free(mhd_corpus* corpus) { delete corpus; }

MHD_API mhd_status mhd_classifier_load(const char* model_path, const char* vocab_path,
                                       mhd_classifier** out) {
  return guarded([&] {
    require(model_path, "model_path");
    require(vocab_path, "vocab_path");
    require(out, "out");
    auto model = mhd::models::load_model(model_path);
    auto vocab = mhd::features::Vocabulary::load(vocab_path);
    if (vocab.hash() != model.model->vocab_hash()) {
      mhd::fail(mhd::ErrorCode::kHashMismatch,
                "model " + model.id + " was not trained with vocabulary '" +
                    std::string(vocab_path) + "'");
    }
    *out = new mhd_classifier{std::move(model), std::move(vocab)};
  });
}

MHD_API const char* mhd_classifier_id(const mhd_classifier* classifier) {
  return classifier == nullptr ? "" : classifier->model.id.c_str();
}

MHD_API mhd_status mhd_classifier_score(const mhd_classifier* classifier, const char* text,
                                        double* score, int* label) {
  return guarded([&] {
    require(classifier, "classifier");
    require(text, "text");
    const auto p = classifier->model.model->predict(mhd::text::normalize(text), classifier->vocab);
    if (score != nullptr) *score = p.score;
    if (label != nullptr) *label = static_cast<int>(p.label);
  });
}

MHD_API void mhd_classifier_free(mhd_classifier* classifier) { delete classifier; }

MHD_API mhd_status mhd_chi_square(const double* observed, const double* prior, size_t n,
                                  double* chi2, double* p_value) {
  return guarded([&] {
    require(observed, "observed");
    std::span<const double> obs(observed, n);
    mhd::eval::SignificanceResult r;
    if (prior == nullptr) {
      r = mhd::eval::chi_square(obs, mhd::eval::Baseline::kUniform);
    } else {
      r = mhd::eval::chi_square(obs, mhd::eval::Baseline::kWeighted,
                                std::vector<double>(prior, prior + n));
    }
    if (chi2 != nullptr) *chi2 = r.chi2;
    if (p_value != nullptr) *p_value = r.p_value;
  });
}

MHD_API mhd_status mhd_metrics(uint64_t tp, uint64_t fp, uint64_t fn, uint64_t tn,
                               mhd_metrics_report* out) {
  return guarded([&] {
    require(out, "out");
    mhd::eval::ConfusionMatrix cm{tp, fp, fn, tn};
    const auto m = mhd::eval::metrics(cm);
    auto conv = [](const mhd::eval::ClassMetrics& c) {
      return mhd_class_metrics{c.precision, c.recall, c.f1, c.degenerate ? 1 : 0};
    };
    out->control = conv(m.control);
    out->diagnosed = conv(m.diagnosed);
    out->macro_f1 = m.macro_f1;
    out->accuracy = cm.accuracy();
  });
}

}  // extern "C"
