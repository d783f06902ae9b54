// SPDX-License-Identifier: Apache-2.0
//
// allpass: matrix all-pass filter design by boundary interpolation
// Copyright (C) 2026 The allpass authors
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

#ifndef ALLPASS_H
#define ALLPASS_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(AP_BUILDING_LIBRARY)
#define AP_API __attribute__((visibility("default")))
#else
#define AP_API
#endif

typedef enum ap_status
{
    AP_OK = 0,
    AP_ERR_INVALID_ARGUMENT = 1,
    AP_ERR_PICK_NOT_POSITIVE_DEFINITE = 2,
    AP_ERR_DEGENERATE_CONSTRUCTION = 3,
    AP_ERR_SINGULAR_LEADING_COEFFICIENT = 4,
    AP_ERR_DIMENSION_MISMATCH = 5,
    AP_ERR_DUPLICATE_FREQUENCY = 6,
    AP_ERR_FREQUENCY_AT_PI = 7,
    AP_ERR_NON_UNITARY = 8,
    AP_ERR_NON_HERMITIAN_GAMMA = 9,
    AP_ERR_NON_POSITIVE_GAMMA = 10,
    AP_ERR_MISSING_GAMMA = 11,
    AP_ERR_NON_HERMITIAN_INPUT = 12,
    AP_ERR_SINGULAR_LEADING_BLOCK = 13,
    AP_ERR_SINGULAR_GAMMA = 14,
    AP_ERR_LOST_NEUTRALITY = 15,
    AP_ERR_NON_INVERTIBLE_TOP_BLOCK = 16,
    AP_ERR_SINGULAR_DENOMINATOR = 17,
    AP_ERR_INFEASIBLE_START = 18,
    AP_ERR_PARSE = 19,
    AP_ERR_IO = 20,
    AP_ERR_INTERNAL = 21
} ap_status;

typedef struct ap_dataset ap_dataset;
typedef struct ap_gammas ap_gammas;
typedef struct ap_filter ap_filter;
typedef struct ap_signal ap_signal;
typedef struct ap_report ap_report;

typedef struct ap_barrier_config
{
    double mu_init; /* <= 0: trace of the initial Pick matrix over nm */
    double mu_decay;
    double mu_final;
    double pd_margin;
    double newton_tol;
    int max_newton;
    int max_outer;
} ap_barrier_config;

typedef struct ap_design_options
{
    int max_retries;
    uint64_t seed;
    double pd_margin; /* < 0: relative default */
    double degeneracy_condition;
} ap_design_options;

/* Complex matrices cross the boundary as row-major interleaved (re, im) doubles. */

/* Message and witness of the last failure on the calling thread */
AP_API const char *ap_last_error(void);
AP_API double ap_last_error_value(void);
AP_API const char *ap_status_name(ap_status status);
AP_API void ap_string_free(char *s);

AP_API void ap_barrier_config_default(ap_barrier_config *cfg);
AP_API void ap_design_options_default(ap_design_options *opts);

/* Data sets */
AP_API ap_status ap_dataset_parse(const char *json, ap_dataset **out);
AP_API ap_status ap_dataset_load(const char *path, ap_dataset **out);
AP_API ap_status ap_dataset_create(int m, int n, const double *omegas, const double *responses, const double *gammas,
                                   ap_dataset **out);
AP_API void ap_dataset_free(ap_dataset *ds);
AP_API int ap_dataset_dim(const ap_dataset *ds);
AP_API int ap_dataset_size(const ap_dataset *ds);
AP_API int ap_dataset_has_gammas(const ap_dataset *ds);
AP_API ap_status ap_dataset_to_json(const ap_dataset *ds, char **out);
AP_API ap_status ap_dataset_check_pick(const ap_dataset *ds, double margin, int *is_pd, double *min_eigenvalue);
AP_API ap_status ap_dataset_pick_json(const ap_dataset *ds, char **out);
AP_API ap_status ap_dataset_with_gammas(const ap_dataset *ds, const ap_gammas *g, ap_dataset **out);

/* Group-delay optimizer */
AP_API ap_status ap_optimize_dataset(const ap_dataset *ds, const ap_barrier_config *cfg, ap_gammas **out);
AP_API ap_status ap_optimize_json(const char *json, const ap_barrier_config *cfg, ap_gammas **out);
AP_API void ap_gammas_free(ap_gammas *g);
AP_API int ap_gammas_count(const ap_gammas *g);
AP_API ap_status ap_gammas_get(const ap_gammas *g, int i, double *out);
AP_API ap_status ap_gammas_info(const ap_gammas *g, double *achieved_trace, double *pd_witness, int *converged);
AP_API ap_status ap_gammas_to_json(const ap_gammas *g, char **out);

/* Filters */
AP_API ap_status ap_design(const ap_dataset *ds, const ap_design_options *opts, ap_filter **out);
AP_API ap_status ap_filter_parse(const char *json, ap_filter **out);
AP_API ap_status ap_filter_load(const char *path, ap_filter **out);
AP_API ap_status ap_filter_save(const ap_filter *f, const char *path);
AP_API ap_status ap_filter_to_json(const ap_filter *f, char **out);
AP_API void ap_filter_free(ap_filter *f);
AP_API int ap_filter_dim(const ap_filter *f);
AP_API int ap_filter_degree(const ap_filter *f);
AP_API ap_status ap_filter_eval(const ap_filter *f, double omega, double *out);
AP_API ap_status ap_filter_group_delay(const ap_filter *f, double omega, double *out, double *skew_norm);
AP_API ap_status ap_filter_unitarity_deviation(const ap_filter *f, int grid_size, double *out);
AP_API ap_status ap_filter_pole_radius(const ap_filter *f, double *out);
/* Interpolation error and group-delay spectrum mismatch at point i of ds (NaN without a gamma) */
AP_API ap_status ap_filter_check_point(const ap_filter *f, const ap_dataset *ds, int i, double *interp_error,
                                       double *spectrum_error);

/* Signals */
AP_API ap_status ap_signal_create(int m, size_t length, const double *samples, ap_signal **out);
AP_API ap_status ap_signal_parse_csv(const char *csv, ap_signal **out);
AP_API ap_status ap_signal_load_csv(const char *path, ap_signal **out);
AP_API ap_status ap_signal_save_csv(const ap_signal *x, const char *path);
AP_API void ap_signal_free(ap_signal *x);
AP_API int ap_signal_dim(const ap_signal *x);
AP_API size_t ap_signal_length(const ap_signal *x);
AP_API ap_status ap_signal_get(const ap_signal *x, size_t t, double *out);
AP_API ap_status ap_simulate(const ap_filter *f, const ap_signal *x, ap_signal **out, int *unstable,
                             double *spectral_radius);

/* Experiments; n_seeds <= 0 and has_seed == 0 keep the config values */
AP_API ap_status ap_compare_run(const char *config_json, int n_seeds, int has_seed, uint64_t seed, ap_report **out);
AP_API ap_status ap_bench_run(const char *config_json, int has_seed, uint64_t seed, ap_report **out);
AP_API ap_status ap_report_csv(const ap_report *r, char **out);
AP_API ap_status ap_report_summary_json(const ap_report *r, char **out);
AP_API void ap_report_free(ap_report *r);

#ifdef __cplusplus
}
#endif

#endif
