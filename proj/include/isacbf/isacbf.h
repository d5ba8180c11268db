// SPDX-License-Identifier: Apache-2.0
//
// isacbf - hybrid transmit beamforming for mmWave integrated sensing and communication
// Copyright (C) 2026 The isacbf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

/* C interface to the hybrid beamforming core. All objects are opaque
 * handles owned by the caller and released with the matching destroy call.
 * Every function returns an isacbf_status; on failure the message of the
 * most recent error on the calling thread is available from
 * isacbf_last_error(). Strings returned through char** are allocated by the
 * library and released with isacbf_string_free(). */
#ifndef ISACBF_ISACBF_H
#define ISACBF_ISACBF_H

#include <stddef.h>
#include <stdint.h>

#if defined(ISACBF_BUILDING_LIBRARY)
#define ISACBF_API __attribute__((visibility("default")))
#else
#define ISACBF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum isacbf_status {
  ISACBF_OK = 0,
  ISACBF_INVALID_ARGUMENT = 1, /* null handle or out-of-range index */
  ISACBF_VALIDATION = 2,       /* configuration violates an invariant */
  ISACBF_NUMERICAL = 3,        /* solver produced non-finite values */
  ISACBF_IO = 4,
  ISACBF_INTERNAL = 5
} isacbf_status;

typedef struct isacbf_scenario isacbf_scenario;
typedef struct isacbf_channels isacbf_channels;
typedef struct isacbf_result isacbf_result;

typedef enum isacbf_experiment {
  ISACBF_POWER_SWEEP = 0,
  ISACBF_TRADEOFF = 1,
  ISACBF_BEAMPATTERN = 2,
  ISACBF_IMSR = 3
} isacbf_experiment;

typedef struct isacbf_metrics {
  double sbp_linear;  /* mean beampattern gain over the beam directions */
  double sbp_weighted;
  double sum_rate;    /* bit/s/Hz */
  double power_mw;
  double final_residual;
  double imsr;        /* linear mainlobe/sidelobe ratio, 40 +- 10 degrees */
  int converged;
  int outer_iterations;
  int monotonicity_violations;
} isacbf_metrics;

typedef void (*isacbf_trace_fn)(int outer, int inner, double penalty, double objective, double residual,
                                void* user);

ISACBF_API const char* isacbf_last_error(void);
ISACBF_API const char* isacbf_version(void);
ISACBF_API void isacbf_string_free(char* s);

/* Scenarios */
ISACBF_API isacbf_status isacbf_scenario_create_default(isacbf_scenario** out);
ISACBF_API isacbf_status isacbf_scenario_create_desk(isacbf_scenario** out);
ISACBF_API isacbf_status isacbf_scenario_from_json(const char* text, isacbf_scenario** out);
ISACBF_API isacbf_status isacbf_scenario_load(const char* path, isacbf_scenario** out);
ISACBF_API isacbf_status isacbf_scenario_to_json(const isacbf_scenario* s, char** out);
ISACBF_API isacbf_status isacbf_scenario_set_p_tx_dbm(isacbf_scenario* s, double p_tx_dbm);
/* Applies one threshold to every CU. */
ISACBF_API isacbf_status isacbf_scenario_set_sinr_threshold_db(isacbf_scenario* s, double sinr_db);
ISACBF_API isacbf_status isacbf_scenario_set_sinr_thresholds_db(isacbf_scenario* s, const double* sinr_db, size_t n);
/* Also sets the RF chain count to n_cu + n_beams. */
ISACBF_API isacbf_status isacbf_scenario_set_n_beams(isacbf_scenario* s, int n_beams);
ISACBF_API isacbf_status isacbf_scenario_set_seed(isacbf_scenario* s, uint64_t seed);
ISACBF_API isacbf_status isacbf_scenario_dims(const isacbf_scenario* s, int* n_tx, int* n_rf, int* n_cu,
                                              int* n_beams);
ISACBF_API isacbf_status isacbf_scenario_validate(const isacbf_scenario* s);
ISACBF_API void isacbf_scenario_destroy(isacbf_scenario* s);

/* Channels */
ISACBF_API isacbf_status isacbf_channels_sample(const isacbf_scenario* s, uint64_t seed, isacbf_channels** out);
ISACBF_API isacbf_status isacbf_channels_from_json(const char* text, isacbf_channels** out);
ISACBF_API isacbf_status isacbf_channels_to_json(const isacbf_channels* c, char** out);
ISACBF_API void isacbf_channels_destroy(isacbf_channels* c);

/* Optimization. trace may be null. */
ISACBF_API isacbf_status isacbf_optimize(const isacbf_scenario* s, const isacbf_channels* c, isacbf_trace_fn trace,
                                         void* user, isacbf_result** out);
ISACBF_API isacbf_status isacbf_radar_only(const isacbf_scenario* s, isacbf_result** out);
ISACBF_API isacbf_status isacbf_comm_only(const isacbf_scenario* s, const isacbf_channels* c,
                                          isacbf_result** out);
ISACBF_API isacbf_status isacbf_result_metrics(const isacbf_result* r, isacbf_metrics* out);
/* Copies min(n, count) values; count receives the available number. */
ISACBF_API isacbf_status isacbf_result_sinr(const isacbf_result* r, double* sinr, size_t n, size_t* count);
ISACBF_API isacbf_status isacbf_result_beam_weights(const isacbf_result* r, double* w, size_t n, size_t* count);
/* Linear gain at the given angles (degrees). */
ISACBF_API isacbf_status isacbf_result_beampattern(const isacbf_result* r, const double* angles_deg, size_t n,
                                                   double* gain);
ISACBF_API isacbf_status isacbf_result_diagnostics_json(const isacbf_result* r, char** out);
ISACBF_API isacbf_status isacbf_result_precoder_json(const isacbf_result* r, char** out);
ISACBF_API void isacbf_result_destroy(isacbf_result* r);

/* Experiments. base may be null (default scenario for the chosen scale).
 * Writes CSV to out_path and metadata to out_path + ".json"; summary
 * receives the CSV text when non-null. trials <= 0 keeps the default. */
typedef struct isacbf_experiment_options {
  isacbf_experiment kind;
  int trials;
  uint64_t seed;
  int paper_scale;
  int threads;
  const double* values; /* sweep values, null keeps the default */
  size_t n_values;
  const double* sinr_series_db; /* power sweep only */
  size_t n_sinr_series;
  const int* beam_series;
  size_t n_beam_series;
} isacbf_experiment_options;

ISACBF_API void isacbf_experiment_options_init(isacbf_experiment_options* opts, isacbf_experiment kind);
ISACBF_API isacbf_status isacbf_run_experiment(const isacbf_scenario* base, const isacbf_experiment_options* opts,
                                               const char* out_path, char** summary);

#ifdef __cplusplus
}
#endif

#endif
