/*
 * SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The amw Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to the amw library: ambiguity-weighted, mask-aware multi-label
 * learning on precomputed embeddings.
 *
 * Objects are opaque handles created by amw_*_create / load functions and
 * released with the matching amw_*_destroy. Every fallible call returns an
 * amw_status; on failure a description is available from amw_last_error()
 * on the calling thread until its next failing call. Strings returned
 * through `const char**` are owned by the handle they came from and stay
 * valid until that handle is destroyed or modified.
 */

#ifndef AMW_AMW_H_
#define AMW_AMW_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(AMW_BUILDING_LIBRARY)
#    define AMW_API __declspec(dllexport)
#  else
#    define AMW_API __declspec(dllimport)
#  endif
#else
#  define AMW_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum amw_status {
  AMW_OK = 0,
  AMW_ERR_INVALID_ARGUMENT = 1, /* bad key, value, shape or precondition */
  AMW_ERR_IO = 2,               /* file cannot be opened, read or written */
  AMW_ERR_FORMAT = 3,           /* malformed file content */
  AMW_ERR_NUMERIC = 4,          /* non-finite loss, gradient or parameter */
  AMW_ERR_INTERNAL = 5
} amw_status;

typedef enum amw_mode {
  AMW_MODE_BASELINE = 0,
  AMW_MODE_AMBIGUITY = 1,
  AMW_MODE_EVIDENTIAL = 2
} amw_mode;

typedef enum amw_threshold_policy {
  AMW_THRESHOLD_FIXED = 0,
  AMW_THRESHOLD_GLOBAL = 1,
  AMW_THRESHOLD_PER_LABEL = 2
} amw_threshold_policy;

typedef enum amw_embedding_format {
  AMW_EMBEDDINGS_TEXT = 0,
  AMW_EMBEDDINGS_BINARY = 1
} amw_embedding_format;

typedef enum amw_split {
  AMW_SPLIT_TRAIN = 0,
  AMW_SPLIT_VALIDATION = 1,
  AMW_SPLIT_TEST = 2
} amw_split;

typedef struct amw_config amw_config;
typedef struct amw_dataset amw_dataset;
typedef struct amw_model amw_model;
typedef struct amw_report amw_report;
typedef struct amw_stability amw_stability;

AMW_API const char* amw_version(void);
AMW_API const char* amw_last_error(void);
AMW_API const char* amw_status_string(amw_status status);

/* ---- Configuration ----------------------------------------------------- */

AMW_API size_t amw_config_key_count(void);
/* Name, default value and help text of key `index`; NULL when out of range. */
AMW_API const char* amw_config_key_name(size_t index);
AMW_API const char* amw_config_key_default(size_t index);
AMW_API const char* amw_config_key_help(size_t index);

AMW_API amw_status amw_config_create(amw_config** out);
AMW_API void amw_config_destroy(amw_config* config);
AMW_API amw_status amw_config_set(amw_config* config, const char* key,
                                  const char* value);
AMW_API amw_status amw_config_get(const amw_config* config, const char* key,
                                  const char** value);
AMW_API amw_status amw_config_merge_file(amw_config* config, const char* path);
AMW_API amw_status amw_config_text(const amw_config* config, const char** text);
AMW_API amw_status amw_config_json(const amw_config* config, const char** json);
AMW_API amw_status amw_config_hash(const amw_config* config, uint64_t* hash);

/* ---- Datasets ---------------------------------------------------------- */

/*
 * Loads a labels TSV and an embeddings file (text or binary, auto-detected).
 * `label_names` may be NULL (n_labels == 0) to take the label space from the
 * file header; otherwise file columns map onto the given names and absent
 * names are unobserved. `texts_path` and `lang` may be NULL.
 */
AMW_API amw_status amw_dataset_load(const char* labels_path,
                                    const char* embeddings_path,
                                    const char* texts_path,
                                    const char* const* label_names,
                                    size_t n_labels, amw_split split,
                                    const char* lang, amw_dataset** out);
AMW_API amw_status amw_dataset_save(const amw_dataset* data,
                                    const char* labels_path,
                                    const char* embeddings_path,
                                    amw_embedding_format format);
AMW_API void amw_dataset_destroy(amw_dataset* data);

AMW_API size_t amw_dataset_size(const amw_dataset* data);
AMW_API size_t amw_dataset_dim(const amw_dataset* data);
AMW_API size_t amw_dataset_num_labels(const amw_dataset* data);
AMW_API const char* amw_dataset_label_name(const amw_dataset* data, size_t k);
AMW_API const char* amw_dataset_id(const amw_dataset* data, size_t i);
/* Observed fraction of label cells. */
AMW_API double amw_dataset_observed_fraction(const amw_dataset* data);

AMW_API amw_status amw_dataset_simulate_mask(const amw_dataset* data,
                                             double rho, uint64_t seed,
                                             amw_dataset** out);

/*
 * Synthetic logistic data: one ground truth (returned as a baseline model in
 * `truth`, may be NULL) and `n` fully observed instances.
 */
AMW_API amw_status amw_synthesize(size_t n, size_t dim, size_t num_labels,
                                  double ambiguity_fraction, uint64_t seed,
                                  amw_dataset** out, amw_model** truth);
/* Further instances drawn from the ground truth of an amw_synthesize call. */
AMW_API amw_status amw_synthesize_from(const amw_model* truth, size_t n,
                                       double ambiguity_fraction, uint64_t seed,
                                       amw_split split, amw_dataset** out);

/* ---- Models ------------------------------------------------------------ */

/*
 * Trains on `train` with per-epoch checkpoint selection on `dev` using the
 * training keys of `config` and the given mode and seed. `log` (may be NULL)
 * receives the train log; its JSON is line-delimited.
 */
AMW_API amw_status amw_train(const amw_config* config, amw_mode mode,
                             uint64_t seed, const amw_dataset* train,
                             const amw_dataset* dev, amw_model** out,
                             amw_report** log);

AMW_API amw_status amw_model_save(const amw_model* model, const char* path);
AMW_API amw_status amw_model_load(const char* path, amw_model** out);
AMW_API void amw_model_destroy(amw_model* model);
AMW_API amw_mode amw_model_mode(const amw_model* model);
AMW_API size_t amw_model_dim(const amw_model* model);
AMW_API size_t amw_model_num_labels(const amw_model* model);
AMW_API const char* amw_model_label_name(const amw_model* model, size_t k);

/* Row-major N x K probabilities; `capacity` is the element count of `out`. */
AMW_API amw_status amw_model_predict(const amw_model* model,
                                     const amw_dataset* data, double* out,
                                     size_t capacity);

/* ---- Evaluation and analysis ------------------------------------------- */

/*
 * Metrics of `model` on `data`. Tuned policies fit thresholds on `dev`, which
 * may be NULL only for AMW_THRESHOLD_FIXED.
 */
AMW_API amw_status amw_evaluate(const amw_model* model,
                                const amw_dataset* data,
                                amw_threshold_policy policy,
                                const amw_dataset* dev, amw_report** out);

AMW_API amw_status amw_analyze_entropy_bins(const amw_model* model,
                                            const amw_dataset* data,
                                            size_t n_bins, double tau,
                                            amw_report** out);
AMW_API amw_status amw_analyze_label_uncertainty(const amw_model* model,
                                                 const amw_dataset* data,
                                                 amw_report** out);
AMW_API amw_status amw_analyze_nearest_neighbors(const amw_dataset* query,
                                                 const amw_dataset* bank,
                                                 size_t k, amw_report** out);

/* Mean and population std of metrics across seeded runs. */
AMW_API amw_status amw_stability_create(amw_stability** out);
AMW_API void amw_stability_destroy(amw_stability* stability);
/* `report` must come from amw_evaluate; `model` supplies mode and labels. */
AMW_API amw_status amw_stability_add(amw_stability* stability,
                                     const char* train_name,
                                     const amw_model* model,
                                     const amw_report* report);
AMW_API amw_status amw_stability_report(const amw_stability* stability,
                                        amw_report** out);

/* ---- Reports ----------------------------------------------------------- */

AMW_API const char* amw_report_json(const amw_report* report);
AMW_API const char* amw_report_text(const amw_report* report);
/* Named scalar of a metrics report ("hl", "rl", "mif1", "maf1", "ap",
   "jaccard"); AMW_ERR_INVALID_ARGUMENT when absent or undefined. */
AMW_API amw_status amw_report_metric(const amw_report* report,
                                     const char* name, double* value);
AMW_API void amw_report_destroy(amw_report* report);

/* ---- Utilities --------------------------------------------------------- */

/* FNV-1a 64-bit checksum of a file's bytes. */
AMW_API amw_status amw_checksum_file(const char* path, uint64_t* out);

#ifdef __cplusplus
}
#endif

#endif /* AMW_AMW_H_ */
