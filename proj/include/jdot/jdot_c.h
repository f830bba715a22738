// Copyright 2026 The JDOT Authors
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

/*
 * C interface to libjdot.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns a jdot_status; on
 * failure a description is available from jdot_last_error() on the same
 * thread until the next failing call. Strings returned through char**
 * out-parameters are allocated by the library and released with
 * jdot_string_free. Matrices cross the boundary as row-major double
 * buffers.
 *
 * Handles are not synchronized; distinct handles may be used from distinct
 * threads concurrently.
 */

#ifndef JDOT_C_H_
#define JDOT_C_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define JDOT_API __declspec(dllexport)
#else
#define JDOT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum jdot_status {
  JDOT_OK = 0,
  JDOT_ERR_INVALID_ARGUMENT = 1, /* precondition or config violation */
  JDOT_ERR_DATA = 2,             /* unreadable / malformed / inconsistent data */
  JDOT_ERR_SOLVER = 3,           /* numerical failure */
  JDOT_ERR_INTERNAL = 4
} jdot_status;

typedef enum jdot_task {
  JDOT_TASK_REGRESSION = 0,
  JDOT_TASK_CLASSIFICATION = 1
} jdot_task;

typedef struct jdot_dataset jdot_dataset;
typedef struct jdot_model jdot_model;
typedef struct jdot_result jdot_result;

typedef struct jdot_metrics {
  int has_accuracy;
  double accuracy; /* fraction in [0, 1] */
  int has_mse;
  double mse;
  int has_within_range;
  double within_range; /* fraction in [0, 1] */
} jdot_metrics;

typedef struct jdot_plan_info {
  size_t n_source;
  size_t n_target;
  double objective;
  double row_err;
  double col_err;
  int converged;
  int64_t iterations;
} jdot_plan_info;

JDOT_API const char* jdot_version(void);
JDOT_API const char* jdot_last_error(void);
JDOT_API void jdot_string_free(char* s);

/* ---- datasets ---------------------------------------------------------- */

/* `label_columns`: comma-separated column names, or NULL/"" for an
 * unlabeled file. `labels_optional` != 0 tolerates missing label columns.
 * `num_classes` = 0 infers it from the data (classification only). */
JDOT_API jdot_status jdot_dataset_load_csv(const char* path, jdot_task task,
                                           const char* label_columns, int num_classes,
                                           int labels_optional, jdot_dataset** out);
/* Loads a JSON dataset descriptor ({"path", "task", "label_columns",
 * "feature_columns", "num_classes"}) and the CSV it names. A positive
 * `num_classes` overrides the descriptor's value. */
JDOT_API jdot_status jdot_dataset_load_descriptor(const char* path, int num_classes,
                                                  int labels_optional, jdot_dataset** out);
JDOT_API jdot_status jdot_dataset_save_csv(const jdot_dataset* ds, const char* path);

/* `labels` may be NULL. Classification labels are class indices stored as
 * doubles (n values); regression labels are n x label_dim. */
JDOT_API jdot_status jdot_dataset_create(jdot_task task, const double* features, size_t n,
                                         size_t dim, const double* labels, size_t label_dim,
                                         int num_classes, jdot_dataset** out);

JDOT_API jdot_status jdot_dataset_gen_rotated_gaussians(size_t n_per_class, double rotation,
                                                        uint64_t seed, jdot_dataset** source,
                                                        jdot_dataset** target);
JDOT_API jdot_status jdot_dataset_gen_regression_shift(size_t n, double noise, uint64_t seed,
                                                       jdot_dataset** source,
                                                       jdot_dataset** target);
JDOT_API jdot_status jdot_dataset_subsample(const jdot_dataset* ds, double fraction,
                                            uint64_t seed, jdot_dataset** out);

JDOT_API size_t jdot_dataset_rows(const jdot_dataset* ds);
JDOT_API size_t jdot_dataset_dim(const jdot_dataset* ds);
JDOT_API int jdot_dataset_has_labels(const jdot_dataset* ds);
JDOT_API int jdot_dataset_num_classes(const jdot_dataset* ds);
JDOT_API jdot_task jdot_dataset_task(const jdot_dataset* ds);
/* Copies rows * dim features into `out` (capacity in doubles). */
JDOT_API jdot_status jdot_dataset_features(const jdot_dataset* ds, double* out, size_t capacity);
JDOT_API void jdot_dataset_free(jdot_dataset* ds);

/* alpha = 1 / max_ij ||x_i^s - x_j^t||^2 */
JDOT_API jdot_status jdot_heuristic_alpha(const jdot_dataset* source, const jdot_dataset* target,
                                          double* alpha);

/* ---- optimal transport ------------------------------------------------- */

/* `cost` is n_source x n_target row-major; `coupling` receives the plan
 * (same size, may be NULL). epsilon <= 0 selects the exact solver. */
JDOT_API jdot_status jdot_ot_solve(const double* cost, size_t n_source, size_t n_target,
                                   double epsilon, int64_t max_iter, double tol,
                                   double* coupling, jdot_plan_info* info);

/* ---- fitting ------------------------------------------------------------ */

/* `config_json` as documented in jdot/serialize.hpp; NULL means defaults. */
JDOT_API jdot_status jdot_fit(const jdot_dataset* source, const jdot_dataset* target,
                              const char* config_json, jdot_result** out);
JDOT_API jdot_status jdot_fit_source_only(const jdot_dataset* source, const jdot_dataset* target,
                                          const char* config_json, jdot_model** out);

JDOT_API double jdot_result_alpha(const jdot_result* r);
JDOT_API double jdot_result_bandwidth(const jdot_result* r);
JDOT_API int jdot_result_iterations(const jdot_result* r);
JDOT_API int jdot_result_converged(const jdot_result* r);
/* First iteration with relative objective change below rel_tol, or 0. */
JDOT_API int jdot_result_converged_at(const jdot_result* r);
JDOT_API size_t jdot_result_num_records(const jdot_result* r);
/* Record `index` in half-step order; `objective` may be NULL. */
JDOT_API jdot_status jdot_result_record(const jdot_result* r, size_t index, int* iteration,
                                        int* is_fit_step, double* objective);
JDOT_API jdot_status jdot_result_trace_jsonl(const jdot_result* r, char** out);
JDOT_API jdot_status jdot_result_plan(const jdot_result* r, double* coupling, size_t capacity,
                                      jdot_plan_info* info);
/* New handle owned by the caller. iteration 0 is f^0 (source only);
 * iteration k >= 1 requires keep_models unless it is the final one. */
JDOT_API jdot_status jdot_result_model(const jdot_result* r, int iteration, jdot_model** out);
JDOT_API void jdot_result_free(jdot_result* r);

/* ---- models ------------------------------------------------------------- */

JDOT_API jdot_status jdot_model_to_json(const jdot_model* m, char** out);
JDOT_API jdot_status jdot_model_from_json(const char* json, jdot_model** out);
JDOT_API jdot_task jdot_model_task(const jdot_model* m);
JDOT_API size_t jdot_model_output_dim(const jdot_model* m);
/* Scores, rows(ds) x output_dim. */
JDOT_API jdot_status jdot_model_predict(const jdot_model* m, const jdot_dataset* ds, double* out,
                                        size_t capacity);
/* Class indices, rows(ds) values (classification models only). */
JDOT_API jdot_status jdot_model_predict_classes(const jdot_model* m, const jdot_dataset* ds,
                                                int* out, size_t capacity);
/* within_range_radius < 0 disables the within-range metric. */
JDOT_API jdot_status jdot_model_evaluate(const jdot_model* m, const jdot_dataset* ds,
                                         double within_range_radius, jdot_metrics* out);
JDOT_API void jdot_model_free(jdot_model* m);

#ifdef __cplusplus
}
#endif

#endif /* JDOT_C_H_ */
