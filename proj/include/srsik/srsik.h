/*
 * Copyright 2026 The srsik Authors
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
 * C interface of libsrsik.
 *
 * Conventions:
 *  - Every fallible call returns srsik_status; SRSIK_OK is zero.
 *  - On failure, srsik_last_error() returns a message for the calling thread,
 *    valid until the next failing call on that thread.
 *  - Rotations are 9 doubles in row-major order; joint vectors are 7 doubles
 *    in radians.
 *  - Objects returned through an out pointer are owned by the caller and
 *    released with the matching *_destroy function. Destroy accepts NULL.
 *  - Handles are not synchronised; share one across threads only for reads.
 */

#ifndef SRSIK_SRSIK_H_
#define SRSIK_SRSIK_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SRSIK_API __declspec(dllexport)
#else
#define SRSIK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum srsik_status {
  SRSIK_OK = 0,
  SRSIK_E_INVALID_ARGUMENT = 1,
  SRSIK_E_PARSE = 2,
  SRSIK_E_IO = 3,
  SRSIK_E_UNREACHABLE = 4,
  SRSIK_E_NO_FEASIBLE_TARGET = 5,
  SRSIK_E_GEOMETRY_MISMATCH = 6,
  SRSIK_E_TRAINING_DIVERGED = 7,
  SRSIK_E_MODEL_MISMATCH = 8,
  SRSIK_E_INTERNAL = 9
} srsik_status;

typedef struct srsik_context srsik_context; /* robot + run configuration */
typedef struct srsik_model srsik_model;     /* trained predictor */
typedef struct srsik_string srsik_string;   /* owned UTF-8 text */

SRSIK_API const char* srsik_version(void);
SRSIK_API const char* srsik_status_name(srsik_status status);
SRSIK_API const char* srsik_last_error(void);

SRSIK_API const char* srsik_string_data(const srsik_string* s);
SRSIK_API size_t srsik_string_size(const srsik_string* s);
SRSIK_API void srsik_string_destroy(srsik_string* s);

/* FNV-1a 64 of a file's bytes. */
SRSIK_API srsik_status srsik_file_hash(const char* path, uint64_t* out);

/* ---- context -------------------------------------------------------- */

/* path == NULL gives the built-in defaults. */
SRSIK_API srsik_status srsik_context_create(const char* config_path, srsik_context** out);
SRSIK_API srsik_status srsik_context_create_json(const char* json, srsik_context** out);
SRSIK_API void srsik_context_destroy(srsik_context* ctx);
SRSIK_API srsik_status srsik_context_config_json(const srsik_context* ctx, srsik_string** out);
SRSIK_API uint64_t srsik_context_geometry_hash(const srsik_context* ctx);

/* Overrides applied after loading; values <= 0 leave the setting alone. */
SRSIK_API srsik_status srsik_context_set_grid(srsik_context* ctx, int n_phi, int n_b);
SRSIK_API srsik_status srsik_context_set_weights(srsik_context* ctx, double omega_m, double omega_c);
SRSIK_API srsik_status srsik_context_set_training(srsik_context* ctx, int epochs, int batch_size,
                                                  double learning_rate, double l2, uint64_t seed);

/* ---- kinematics ----------------------------------------------------- */

SRSIK_API srsik_status srsik_fk(const srsik_context* ctx, const double q[7], double R[9], double p[3]);

/* Closed-form and determinant manipulability of q. */
SRSIK_API srsik_status srsik_manipulability(const srsik_context* ctx, const double q[7],
                                            double* analytic, double* det);

/* Closed-form IK for flags (+-1) and arm angle phi. degeneracy may be NULL. */
SRSIK_API srsik_status srsik_ik(const srsik_context* ctx, const double R[9], const double p[3], int js,
                                int je, int jw, double phi, double q[7], unsigned* degeneracy);

SRSIK_API srsik_status srsik_extract_params(const srsik_context* ctx, const double q[7], int* js,
                                            int* je, int* jw, double* phi);

typedef struct srsik_dls_result {
  double q[7];
  int iterations;
  int converged;
  double error_norm;
} srsik_dls_result;

SRSIK_API srsik_status srsik_dls(const srsik_context* ctx, const double R[9], const double p[3],
                                 const double q_init[7], srsik_dls_result* out);

/* ---- target selection ----------------------------------------------- */

typedef struct srsik_selection {
  double q[7];
  int js, je, jw;
  double phi;
  int branch_class;
  int phi_index;
  int bin;
  double cost;
  int evaluations;
  int feasible_count;
  int fallback_level;
} srsik_selection;

SRSIK_API srsik_status srsik_select_exhaustive(const srsik_context* ctx, const double q0[7],
                                               const double R[9], const double p[3],
                                               srsik_selection* out);

/* Guided search around an explicit (class, bin) guess. */
SRSIK_API srsik_status srsik_select_guided(const srsik_context* ctx, const double q0[7],
                                           const double R[9], const double p[3], int branch_class,
                                           int bin, srsik_selection* out);

/* Predict with the model, then run the guided search on its grid. */
SRSIK_API srsik_status srsik_select_model(const srsik_context* ctx, const srsik_model* model,
                                          const double q0[7], const double R[9], const double p[3],
                                          srsik_selection* out);

/* Writes the 8 x n_phi cost grid as CSV; best may be NULL. */
SRSIK_API srsik_status srsik_costmap(const srsik_context* ctx, const double q0[7], const double R[9],
                                     const double p[3], const char* csv_path, srsik_selection* best);

/* ---- dataset -------------------------------------------------------- */

typedef void (*srsik_progress_fn)(uint64_t done, uint64_t total, void* user);

/* workers 0 uses all cores. Stats JSON: count, discarded, seconds, class histogram. */
SRSIK_API srsik_status srsik_dataset_generate(const srsik_context* ctx, uint64_t count, uint64_t seed,
                                              int workers, const char* path, srsik_progress_fn progress,
                                              void* user, srsik_string** stats_json);
SRSIK_API srsik_status srsik_dataset_info(const char* path, srsik_string** json);
SRSIK_API srsik_status srsik_dataset_export_csv(const char* path, const char* csv_path, uint64_t limit);

/* ---- model ---------------------------------------------------------- */

typedef struct srsik_epoch {
  int epoch;
  double train_acc_class, train_acc_bin, train_loss_class, train_loss_bin;
  double val_acc_class, val_acc_bin, val_loss_class, val_loss_bin;
} srsik_epoch;

typedef void (*srsik_epoch_fn)(const srsik_epoch* metrics, void* user);

/*
 * Trains on the dataset with the context's training settings (80/10/10 split
 * seeded by the training seed), writes the model and, when metrics_csv is not
 * NULL, the per-epoch metrics. Summary JSON holds the test-split evaluation.
 */
SRSIK_API srsik_status srsik_train(const srsik_context* ctx, const char* dataset_path,
                                   const char* model_path, const char* metrics_csv,
                                   srsik_epoch_fn on_epoch, void* user, srsik_string** summary_json);

SRSIK_API srsik_status srsik_model_load(const char* path, srsik_model** out);
SRSIK_API void srsik_model_destroy(srsik_model* model);
SRSIK_API srsik_status srsik_model_info(const srsik_model* model, srsik_string** json);

/* Test-split evaluation on the dataset the model was trained on. */
SRSIK_API srsik_status srsik_model_evaluate(const srsik_model* model, const char* dataset_path,
                                            srsik_string** json);

typedef struct srsik_prediction {
  int branch_class;
  int bin;
  double confidence_class;
  double confidence_bin;
} srsik_prediction;

SRSIK_API srsik_status srsik_predict(const srsik_model* model, const double q0[7], const double R[9],
                                     const double p[3], srsik_prediction* out);

/* ---- trajectory and experiments ------------------------------------- */

/* Report JSON; csv_path may be NULL. Non-convergence is reported, not an error. */
SRSIK_API srsik_status srsik_plan(const srsik_context* ctx, const double q0[7], const double q_goal[7],
                                  const char* csv_path, srsik_string** report_json);

typedef struct srsik_montecarlo_options {
  int pairs;
  uint64_t seed;
  int run_nn;
  int run_dls;
  int workers; /* 0: all cores */
} srsik_montecarlo_options;

/* model may be NULL when run_nn is 0; csv_path may be NULL. */
SRSIK_API srsik_status srsik_montecarlo(const srsik_context* ctx, const srsik_model* model,
                                        const srsik_montecarlo_options* options, const char* csv_path,
                                        srsik_progress_fn progress, void* user,
                                        srsik_string** summary_json);

typedef struct srsik_bench_options {
  int targets;
  int warmup;
  int repetitions;
  uint64_t seed;
} srsik_bench_options;

/* model may be NULL. */
SRSIK_API srsik_status srsik_bench(const srsik_context* ctx, const srsik_model* model,
                                   const srsik_bench_options* options, srsik_string** report_json);

#ifdef __cplusplus
}
#endif

#endif /* SRSIK_SRSIK_H_ */
