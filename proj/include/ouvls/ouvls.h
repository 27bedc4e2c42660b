// Copyright (c) 2026 The ouvls Authors. All Rights Reserved.
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

#ifndef OUVLS_OUVLS_H_
#define OUVLS_OUVLS_H_

/* Plain C interface to the ouvls library. Every function returns an
 * ouvls_status; on failure, ouvls_last_error() describes the problem for the
 * calling thread. Strings returned through char** are owned by the caller and
 * released with ouvls_free_string(). */

#include <stddef.h>
#include <stdint.h>

#if defined(OUVLS_BUILDING_LIBRARY)
#define OUVLS_API __attribute__((visibility("default")))
#else
#define OUVLS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ouvls_status {
  OUVLS_OK = 0,
  OUVLS_PARTIAL = 1, /* finished, but some outputs were omitted */
  OUVLS_ERR_INVALID_ARGUMENT = -1,
  OUVLS_ERR_DOMAIN = -2,
  OUVLS_ERR_IO = -3,
  OUVLS_ERR_FORMAT = -4,
  OUVLS_ERR_CONFIG = -5,
  OUVLS_ERR_TRAINING = -6,
  OUVLS_ERR_INTERNAL = -7
} ouvls_status;

#define OUVLS_NUM_CLASSES 11

OUVLS_API const char* ouvls_version(void);
/* Message of the last failure on this thread; "" when none. */
OUVLS_API const char* ouvls_last_error(void);
OUVLS_API void ouvls_free_string(char* s);

/* Progress lines from long-running commands. NULL disables logging. */
typedef void (*ouvls_log_fn)(const char* line, void* user);
OUVLS_API void ouvls_set_log(ouvls_log_fn fn, void* user);

/* Label algebra --------------------------------------------------------- */

OUVLS_API ouvls_status ouvls_soft_softmax(const double* z, size_t n, double* out);
OUVLS_API ouvls_status ouvls_softmax(const double* z, size_t n, double* out);
OUVLS_API ouvls_status ouvls_epsilon_for_alpha(double alpha, int num_classes, double* out);
OUVLS_API ouvls_status ouvls_original_ls(const double* one_hot, size_t n, double epsilon, double* out);
OUVLS_API ouvls_status ouvls_vanilla_smooth(const double* one_hot, size_t n, double alpha, double* out);

typedef struct ouvls_prior ouvls_prior;

/* Builds the co-occurrence prior of a dataset directory written by ingest. */
OUVLS_API ouvls_status ouvls_prior_from_dataset(const char* dataset_dir, ouvls_prior** out);
/* Reads a prior JSON document ({counts, mu}). */
OUVLS_API ouvls_status ouvls_prior_load(const char* json_path, ouvls_prior** out);
/* Writes the JSON document; csv_path may be NULL. */
OUVLS_API ouvls_status ouvls_prior_save(const ouvls_prior* prior, const char* json_path, const char* csv_path);
/* counts[10*10], row-major, criterion 1 first. */
OUVLS_API ouvls_status ouvls_prior_counts(const ouvls_prior* prior, long* counts);
/* mu[11] for criterion k in 1..10. */
OUVLS_API ouvls_status ouvls_prior_mu(const ouvls_prior* prior, int k, double* mu);
OUVLS_API void ouvls_prior_free(ouvls_prior* prior);

/* Soft target for one sentence. variant is "none", "vanilla", "uniform" or
 * "prior"; prior may be NULL unless the variant needs it. All vectors have
 * OUVLS_NUM_CLASSES entries. */
OUVLS_API ouvls_status ouvls_smooth(const double* one_hot, const double* parental, const ouvls_prior* prior,
                                    const char* variant, double alpha, double* out);

/* Models ---------------------------------------------------------------- */

typedef struct ouvls_model ouvls_model;

/* path is a model.json file or its directory. */
OUVLS_API ouvls_status ouvls_model_load(const char* path, ouvls_model** out);
OUVLS_API void ouvls_model_free(ouvls_model* model);
OUVLS_API ouvls_status ouvls_model_input_dim(const ouvls_model* model, size_t* out);
/* Preprocesses a raw sentence and returns the k best classes (1..11) with
 * their probabilities. Safe to call concurrently on one model. */
OUVLS_API ouvls_status ouvls_model_predict(const ouvls_model* model, const char* sentence, int k, int* classes,
                                           double* confidences);

/* Commands -------------------------------------------------------------- */
/* Each writes its artifacts to disk and, when result_json is non-NULL,
 * returns a JSON summary. */

/* definitions_path may be NULL for the built-in criterion texts. */
OUVLS_API ouvls_status ouvls_ingest(const char* csv_path, const char* out_dir, uint64_t seed,
                                    const char* definitions_path, char** result_json);
/* baseline may be NULL to keep the config's value. */
OUVLS_API ouvls_status ouvls_train(const char* config_path, const char* baseline, char** result_json);
OUVLS_API ouvls_status ouvls_grid(const char* config_path, char** result_json);
OUVLS_API ouvls_status ouvls_sweep(const char* config_path, char** result_json);
/* Returns OUVLS_PARTIAL when the dataset has no SD set. */
OUVLS_API ouvls_status ouvls_final(const char* config_path, char** result_json);
/* split is "valid", "test" or "sd". data_dir may be NULL to use the dataset
 * recorded next to the checkpoint. */
OUVLS_API ouvls_status ouvls_evaluate(const char* model_path, const char* split, const char* data_dir,
                                      char** result_json);
/* Kept sentences as JSON lines. output_path may be NULL. */
OUVLS_API ouvls_status ouvls_mine(const char* model_a, const char* model_b, const char* input_path,
                                  double confidence_threshold, double iou_threshold, const char* output_path,
                                  char** result_jsonl);
/* result_text receives the human-readable summary. */
OUVLS_API ouvls_status ouvls_report(const char* dir, char** result_text);

#ifdef __cplusplus
}
#endif

#endif /* OUVLS_OUVLS_H_ */
