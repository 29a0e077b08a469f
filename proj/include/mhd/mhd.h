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

/* C interface to the mhd pipeline. Strings returned through char** out
 * parameters are owned by the caller and released with mhd_string_free.
 * Error details for the calling thread are kept until its next call. */
#ifndef MHD_MHD_H_
#define MHD_MHD_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(MHD_BUILDING_LIBRARY)
#define MHD_API __declspec(dllexport)
#else
#define MHD_API __declspec(dllimport)
#endif
#else
#define MHD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mhd_status {
  MHD_OK = 0,
  MHD_ERR_INVALID_ARGUMENT = 1,
  MHD_ERR_IO = 2,
  MHD_ERR_PARSE = 3,
  MHD_ERR_HASH_MISMATCH = 4,
  MHD_ERR_NUMERIC = 5,
  MHD_ERR_MISSING_ANNOTATION = 6,
  MHD_ERR_INTERNAL = 7
} mhd_status;

typedef struct mhd_corpus mhd_corpus;
typedef struct mhd_classifier mhd_classifier;

typedef struct mhd_class_metrics {
  double precision;
  double recall;
  double f1;
  int degenerate;
} mhd_class_metrics;

typedef struct mhd_metrics_report {
  mhd_class_metrics control;
  mhd_class_metrics diagnosed;
  double macro_f1;
  double accuracy;
} mhd_metrics_report;

MHD_API const char* mhd_version(void);
MHD_API const char* mhd_status_string(mhd_status status);

/* Message of the last failure on this thread, "" if none. */
MHD_API const char* mhd_last_error(void);
/* {"status":..,"error":..,"message":..} plus "tweet_ids" for missing
 * annotations. "{}" if none. */
MHD_API const char* mhd_last_error_json(void);

MHD_API void mhd_string_free(char* s);

/* Runs one pipeline stage. On success *manifest_json (if non-null) receives
 * the manifest text. */
MHD_API mhd_status mhd_run_stage(const char* stage, const char* config_json,
                                 const char* out_dir, char** manifest_json);
/* out_dir may be null or "" to reuse the manifest's directory. */
MHD_API mhd_status mhd_rerun(const char* manifest_path, const char* out_dir,
                             char** manifest_json);
/* Reads a config file or a manifest and returns the config object. */
MHD_API mhd_status mhd_config_from_file(const char* path, char** config_json);

/* Tokens of the normalized text, one per line. */
MHD_API mhd_status mhd_normalize_text(const char* text, char** tokens);

MHD_API mhd_status mhd_corpus_load(const char* path, mhd_corpus** out, size_t* n_rejected);
MHD_API size_t mhd_corpus_size(const mhd_corpus* corpus);
MHD_API void mhd_corpus_free(mhd_corpus* corpus);

/* Fails with MHD_ERR_HASH_MISMATCH if the vocabulary is not the one the
 * model was trained with. */
MHD_API mhd_status mhd_classifier_load(const char* model_path, const char* vocab_path,
                                       mhd_classifier** out);
MHD_API const char* mhd_classifier_id(const mhd_classifier* classifier);
/* label: 1 Diagnosed, 0 Control. */
MHD_API mhd_status mhd_classifier_score(const mhd_classifier* classifier, const char* text,
                                        double* score, int* label);
MHD_API void mhd_classifier_free(mhd_classifier* classifier);

/* Pearson test over n classes. prior null means a uniform baseline. */
MHD_API mhd_status mhd_chi_square(const double* observed, const double* prior, size_t n,
                                  double* chi2, double* p_value);
MHD_API mhd_status mhd_metrics(uint64_t tp, uint64_t fp, uint64_t fn, uint64_t tn,
                               mhd_metrics_report* out);

#ifdef __cplusplus
}
#endif

#endif /* MHD_MHD_H_ */
