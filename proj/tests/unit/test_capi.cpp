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

// Exercises the shared library strictly through its C header.
#include <gtest/gtest.h>
#include <unistd.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "mhd/mhd.h"

namespace {

namespace fs = std::filesystem;

std::string take(char* s) {
  std::string out = s ? s : "";
  mhd_string_free(s);
  return out;
}

class CApi : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("mhd_capi_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const char* name) const { return (dir_ / name).string(); }
  const char* dir() const { return dir_str_ = dir_.string(), dir_str_.c_str(); }

  fs::path dir_;
  mutable std::string dir_str_;
};

TEST_F(CApi, VersionAndStatusStrings) {
  EXPECT_STREQ(mhd_version(), "0.1.0");
  EXPECT_STREQ(mhd_status_string(MHD_OK), "ok");
  EXPECT_STRNE(mhd_status_string(MHD_ERR_HASH_MISMATCH), "ok");
}

TEST_F(CApi, NormalizeText) {
  char* out = nullptr;
  ASSERT_EQ(mhd_normalize_text("@bob check https://x.y GoodMorning!", &out), MHD_OK);
  EXPECT_EQ(take(out), "<mention>\ncheck\n<url>\ngood\nmorning\n");
  EXPECT_EQ(mhd_normalize_text(nullptr, &out), MHD_ERR_INVALID_ARGUMENT);
  EXPECT_STRNE(mhd_last_error(), "");
}

TEST_F(CApi, StatsEntryPoints) {
  const double obs[] = {90, 10};
  double chi2 = 0, p = 0;
  ASSERT_EQ(mhd_chi_square(obs, nullptr, 2, &chi2, &p), MHD_OK);
  EXPECT_DOUBLE_EQ(chi2, 64.0);
  EXPECT_LT(p, 1e-10);
  const double zero_prior[] = {1.0, 0.0};
  EXPECT_EQ(mhd_chi_square(obs, zero_prior, 2, &chi2, &p), MHD_ERR_INVALID_ARGUMENT);
  mhd_metrics_report m{};
  ASSERT_EQ(mhd_metrics(0, 0, 100, 2400, &m), MHD_OK);
  EXPECT_DOUBLE_EQ(m.accuracy, 0.96);
  EXPECT_EQ(m.diagnosed.f1, 0.0);
  EXPECT_EQ(m.diagnosed.degenerate, 1);
}

TEST_F(CApi, StagesCorpusAndClassifier) {
  char* manifest = nullptr;
  ASSERT_EQ(mhd_run_stage("synth", R"({"seed": 9, "n_diagnosed": 8, "n_control": 40})", dir(), &manifest),
            MHD_OK)
      << mhd_last_error();
  EXPECT_NE(take(manifest).find("\"stage\""), std::string::npos);
  for (const char* stage : {"label", "build", "train"}) {
    ASSERT_EQ(mhd_run_stage(stage, "{}", dir(), nullptr), MHD_OK) << stage << ": " << mhd_last_error();
  }

  mhd_corpus* corpus = nullptr;
  size_t rejected = 99;
  ASSERT_EQ(mhd_corpus_load(path("corpus.jsonl").c_str(), &corpus, &rejected), MHD_OK);
  EXPECT_GT(mhd_corpus_size(corpus), 0u);
  EXPECT_EQ(rejected, 0u);
  mhd_corpus_free(corpus);
  EXPECT_EQ(mhd_corpus_load(path("absent.jsonl").c_str(), &corpus, nullptr), MHD_ERR_IO);

  mhd_classifier* clf = nullptr;
  ASSERT_EQ(mhd_classifier_load(path("model.json").c_str(), path("vocab.tsv").c_str(), &clf), MHD_OK)
      << mhd_last_error();
  EXPECT_EQ(std::strncmp(mhd_classifier_id(clf), "svm-", 4), 0);
  double score = -1;
  int label = -1;
  ASSERT_EQ(mhd_classifier_score(clf, "feeling low again today", &score, &label), MHD_OK);
  EXPECT_GT(score, 0.0);
  EXPECT_LT(score, 1.0);
  EXPECT_EQ(label, score >= 0.5 ? 1 : 0);
  mhd_classifier_free(clf);

  std::ofstream(path("other_vocab.tsv")) << "<pad>\t0\n<oov>\t1\nzzz\t2\n";
  EXPECT_EQ(mhd_classifier_load(path("model.json").c_str(), path("other_vocab.tsv").c_str(), &clf),
            MHD_ERR_HASH_MISMATCH);
  EXPECT_NE(std::string(mhd_last_error_json()).find("\"hash_mismatch\""), std::string::npos);

  char* cfg = nullptr;
  ASSERT_EQ(mhd_config_from_file(path("manifest_train.json").c_str(), &cfg), MHD_OK);
  EXPECT_NE(take(cfg).find("\"model\""), std::string::npos);
  ASSERT_EQ(mhd_rerun(path("manifest_train.json").c_str(), nullptr, nullptr), MHD_OK) << mhd_last_error();
}

TEST_F(CApi, MissingAnnotationErrorCarriesIds) {
  ASSERT_EQ(mhd_run_stage("synth", R"({"seed": 1, "n_diagnosed": 3, "n_control": 10})", dir(), nullptr),
            MHD_OK);
  std::ofstream(path("annotations.tsv"), std::ios::trunc) << "";
  EXPECT_EQ(mhd_run_stage("label", "{}", dir(), nullptr), MHD_ERR_MISSING_ANNOTATION);
  const std::string err = mhd_last_error_json();
  EXPECT_NE(err.find("\"tweet_ids\""), std::string::npos) << err;
  EXPECT_EQ(mhd_run_stage("bake", "{}", dir(), nullptr), MHD_ERR_INVALID_ARGUMENT);
}

}  // namespace
