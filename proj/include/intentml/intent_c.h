/* Copyright 2026 The intentml Authors
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

/* C interface to the intentml library: driver-intention prediction from
 * discretized vehicle telemetry. All objects are opaque handles owned by the
 * library; every fallible call returns iml_status and leaves a description
 * of the failure in iml_last_error() (thread-local, valid until the next
 * library call on the same thread).
 */

#ifndef INTENTML_INTENT_C_H_
#define INTENTML_INTENT_C_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define IML_API __declspec(dllexport)
#else
#define IML_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum iml_status {
  IML_OK = 0,
  IML_ERR_INVALID_ARGUMENT = 1,
  IML_ERR_IO = 2,
  IML_ERR_PARSE = 3,
  IML_ERR_BAD_STATE = 4,
  IML_ERR_DIVERGED = 5,
  IML_ERR_CORRUPT = 6,
  IML_ERR_INTERNAL = 7
} iml_status;

/* Class order used on probability rows and confusion-matrix axes. */
typedef enum iml_maneuver {
  IML_STRAIGHT = 0,
  IML_LEFT = 1,
  IML_RIGHT = 2,
  IML_STOP = 3
} iml_maneuver;

typedef enum iml_model_kind {
  IML_MODEL_PROPOSED = 0,
  IML_MODEL_STANDARD_LSTM = 1,
  IML_MODEL_MLP = 2
} iml_model_kind;

typedef struct iml_traces iml_traces;
typedef struct iml_symbols iml_symbols;
typedef struct iml_model iml_model;

IML_API const char* iml_version(void);
IML_API const char* iml_last_error(void);

/* ------------------------------------------------------------------ */
/* Synthetic maneuver traces and trace CSV files                       */

typedef struct iml_synth_config {
  /* class counts in generator order: S, P, R, L */
  int64_t count_straight;
  int64_t count_stop;
  int64_t count_right;
  int64_t count_left;
  int32_t length; /* steps per trace */
  double dt;      /* seconds per step */
  double cruise_speed;
  double turn_speed;
  double turn_peak_yaw;
  double stop_decel;
  int32_t turn_decel_start;
  int32_t turn_onset;
  int32_t turn_offset;
  int32_t turn_recover_end;
  int32_t stop_decel_start;
  double velocity_noise_sigma;
  double yaw_noise_sigma;
  uint64_t seed;
} iml_synth_config;

IML_API void iml_synth_config_default(iml_synth_config* cfg);

IML_API iml_status iml_traces_synth(const iml_synth_config* cfg,
                                    iml_traces** out);
IML_API iml_status iml_traces_load_csv(const char* path, iml_traces** out);
IML_API iml_status iml_traces_save_csv(const iml_traces* traces,
                                       const char* path);
IML_API size_t iml_traces_count(const iml_traces* traces);
/* Borrowing accessors; pointers stay valid while the handle lives. Any
 * output pointer may be NULL. */
IML_API iml_status iml_traces_get(const iml_traces* traces, size_t index,
                                  const char** id, iml_maneuver* maneuver,
                                  const double** velocity,
                                  const double** yaw_rate,
                                  const double** acceleration,
                                  size_t* length);
IML_API void iml_traces_free(iml_traces* traces);

/* ------------------------------------------------------------------ */
/* Discretization and symbol files                                     */

typedef struct iml_discretizer_config {
  double velocity_threshold;
  double yaw_low;
  double yaw_high;
} iml_discretizer_config;

IML_API void iml_discretizer_config_default(iml_discretizer_config* cfg);

/* One telemetry sample -> symbol in 1..6. */
IML_API iml_status iml_discretize_step(const iml_discretizer_config* cfg,
                                       double velocity, double yaw_rate,
                                       int32_t* symbol);

IML_API iml_status iml_symbols_from_traces(const iml_traces* traces,
                                           const iml_discretizer_config* cfg,
                                           iml_symbols** out);
IML_API iml_status iml_symbols_save(const iml_symbols* symbols,
                                    const char* path);
IML_API iml_status iml_symbols_load(const char* path, iml_symbols** out);
IML_API size_t iml_symbols_count(const iml_symbols* symbols);
IML_API iml_status iml_symbols_get(const iml_symbols* symbols, size_t index,
                                   const char** id, const int32_t** sequence,
                                   const uint8_t** labels, size_t* length);
/* Seeded stratified split into train/test handles. */
IML_API iml_status iml_symbols_split(const iml_symbols* symbols,
                                     double train_fraction, uint64_t seed,
                                     iml_symbols** train, iml_symbols** test);
IML_API void iml_symbols_free(iml_symbols* symbols);

/* ------------------------------------------------------------------ */
/* Models                                                              */

typedef struct iml_model_config {
  iml_model_kind kind;
  int32_t hidden;        /* recurrent units per direction */
  int32_t attention_dim;
  int32_t layers;
  int32_t mlp_window;
  int32_t mlp_hidden1;
  int32_t mlp_hidden2;
  double learning_rate;
  int32_t batch_size;
  int32_t max_epochs;
  int32_t patience;
  double validation_fraction;
  int32_t threads;
  uint64_t seed;
} iml_model_config;

IML_API void iml_model_config_default(iml_model_config* cfg);

typedef struct iml_epoch_stats {
  int32_t epoch;
  double train_loss;
  double train_accuracy;
  double val_loss;
  double val_accuracy;
} iml_epoch_stats;

IML_API iml_status iml_model_build(const iml_model_config* cfg,
                                   iml_model** out);
/* Returns IML_ERR_DIVERGED when the loss went non-finite; the model keeps
 * the last finite parameters and can still be saved and inspected. */
IML_API iml_status iml_model_train(iml_model* model,
                                   const iml_symbols* train_data);
IML_API iml_status iml_model_history(const iml_model* model,
                                     iml_epoch_stats* out, size_t capacity,
                                     size_t* count);
IML_API iml_status iml_model_config_of(const iml_model* model,
                                       iml_model_config* cfg);
/* probabilities gets length*4 doubles (row-major, one row per step);
 * attention may be NULL, otherwise it gets length*length doubles for the
 * proposed model and is zero-filled for the baselines. */
IML_API iml_status iml_model_forward(const iml_model* model,
                                     const int32_t* symbols, size_t length,
                                     double* probabilities, double* attention);
/* Runs the prefix as a full sequence; probabilities gets 4 doubles (the
 * final step's row). */
IML_API iml_status iml_model_predict_prefix(const iml_model* model,
                                            const int32_t* symbols,
                                            size_t length,
                                            double probabilities[4]);
IML_API iml_status iml_model_save(const iml_model* model, const char* path);
IML_API iml_status iml_model_load(const char* path, iml_model** out);
IML_API void iml_model_free(iml_model* model);

/* ------------------------------------------------------------------ */
/* Evaluation                                                          */

typedef struct iml_metrics_report {
  double precision[4];
  double recall[4];
  double f1[4];
  double macro_precision;
  double macro_recall;
  double macro_f1;
  double accuracy;
  /* majority-vote-per-sequence accuracy; negative when not applicable */
  double sequence_accuracy;
  int64_t scored_steps;
} iml_metrics_report;

/* Per-timestep evaluation over a dataset. confusion gets 16 counts
 * (row-major, rows = ground truth); either output may be NULL. */
IML_API iml_status iml_model_evaluate(const iml_model* model,
                                      const iml_symbols* data,
                                      int64_t confusion[16],
                                      iml_metrics_report* report);
/* Metrics from a bare confusion matrix (sequence_accuracy is set to -1). */
IML_API iml_status iml_metrics_from_confusion(const int64_t confusion[16],
                                              iml_metrics_report* report);

/* Renderers fill buf (NUL-terminated) and set *needed to the full size
 * including the terminator; call with buf == NULL to size the buffer. */
IML_API iml_status iml_render_report(const iml_metrics_report* report,
                                     const int64_t confusion[16], char* buf,
                                     size_t capacity, size_t* needed);
IML_API iml_status iml_render_flat(const iml_metrics_report* report, char* buf,
                                   size_t capacity, size_t* needed);
IML_API iml_status iml_render_confusion_csv(const int64_t confusion[16],
                                            char* buf, size_t capacity,
                                            size_t* needed);

/* Earliest step from which streaming argmax predictions stay on the true
 * label for k consecutive steps; *step is -1 when never stable. */
IML_API iml_status iml_earliest_stable_step(const iml_model* model,
                                            const int32_t* symbols,
                                            size_t length, iml_maneuver truth,
                                            int32_t k, int32_t* step);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* INTENTML_INTENT_C_H_ */
