// Copyright 2026 The hnlab Authors
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

#ifndef HNLAB_HNLAB_H
#define HNLAB_HNLAB_H

/* C interface to the hnlab library. Objects are opaque handles owned by the
 * caller and released with the matching *_free function. Every call returns
 * an hnl_status; on failure hnl_last_error() describes the cause for the
 * calling thread. Complex numbers travel as (re, im) pairs. */

#include <stddef.h>
#include <stdint.h>

#if defined(HNLAB_BUILDING_LIBRARY)
#define HNL_API __attribute__((visibility("default")))
#else
#define HNL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hnl_status {
  HNL_OK = 0,
  HNL_ERR_VALIDATION = 2,
  HNL_ERR_NUMERICAL = 3,
  HNL_ERR_VERIFICATION = 4,
  HNL_ERR_IO = 5
} hnl_status;

typedef struct hnl_ensemble hnl_ensemble;
typedef struct hnl_sequence hnl_sequence;
typedef struct hnl_spectrum hnl_spectrum;
typedef struct hnl_ids hnl_ids;
typedef struct hnl_curve hnl_curve;

HNL_API const char* hnl_version(void);
/* Message of the last failed call on this thread; "" if none. */
HNL_API const char* hnl_last_error(void);

/* ---- ensemble ---- */

/* Parses the "ensemble" object of a run config (JSON text). */
HNL_API hnl_status hnl_ensemble_from_json(const char* json, hnl_ensemble** out);
HNL_API void hnl_ensemble_free(hnl_ensemble* e);
/* g = 1/2 (E eta - E xi) and E log c_0. */
HNL_API hnl_status hnl_ensemble_coupling(const hnl_ensemble* e, double* g, double* mean_log_c);

/* Realization `stream` of size n. Arrays returned by hnl_sequence_coefficients
 * have n + 1 entries each. */
HNL_API hnl_status hnl_sample(const hnl_ensemble* e, size_t n, uint64_t stream, hnl_sequence** out);
/* Explicit coefficients (log coordinates), each array of length n + 1. */
HNL_API hnl_status hnl_sequence_from_arrays(size_t n, const double* xi, const double* eta, const double* q,
                                            hnl_sequence** out);
HNL_API void hnl_sequence_free(hnl_sequence* s);
HNL_API size_t hnl_sequence_size(const hnl_sequence* s);
HNL_API hnl_status hnl_sequence_coefficients(const hnl_sequence* s, double* xi, double* eta, double* q);

/* ---- operator ---- */

/* log|det(J_n - z)| split as log|d(z)| + log|det(H_n - z)|. */
HNL_API hnl_status hnl_log_det(const hnl_sequence* s, double re, double im, double* log_abs_d,
                               double* log_abs_det_h);
/* (1/n) log ||S_n(z)|| for this realization. */
HNL_API hnl_status hnl_finite_lyapunov(const hnl_sequence* s, double re, double im, double* gamma);

/* ---- eig ---- */

HNL_API hnl_status hnl_spectrum_compute(const hnl_sequence* s, hnl_spectrum** out);
HNL_API void hnl_spectrum_free(hnl_spectrum* sp);
HNL_API size_t hnl_spectrum_size(const hnl_spectrum* sp);
/* Writes hnl_spectrum_size() values into each array. */
HNL_API hnl_status hnl_spectrum_values(const hnl_spectrum* sp, double* re, double* im);
HNL_API double hnl_spectrum_residual(const hnl_spectrum* sp);

/* ---- spectral statistics ---- */

HNL_API hnl_status hnl_ids_estimate(const hnl_ensemble* e, size_t n, size_t reps, size_t grid_points,
                                    unsigned jobs, hnl_ids** out);
HNL_API void hnl_ids_free(hnl_ids* ids);
HNL_API double hnl_ids_eval(const hnl_ids* ids, double lambda);
HNL_API hnl_status hnl_ids_support(const hnl_ids* ids, double* lo, double* hi);
/* int log|z - lambda| dN(lambda). */
HNL_API hnl_status hnl_ids_log_potential(const hnl_ids* ids, double re, double im, double* value);
HNL_API hnl_status hnl_ids_stieltjes(const hnl_ids* ids, double re, double im, double* out_re, double* out_im);
/* Ensemble average of the transfer-matrix growth rate. */
HNL_API hnl_status hnl_lyapunov_transfer(const hnl_ensemble* e, size_t n, size_t reps, double re, double im,
                                         unsigned jobs, double* gamma, double* std_error);
HNL_API hnl_status hnl_lyapunov_thouless(const hnl_ids* ids, double mean_log_c, double re, double im,
                                         double* gamma);

/* ---- curves ---- */

HNL_API hnl_status hnl_curve_build(const hnl_ensemble* e, const hnl_ids* ids, hnl_curve** out);
HNL_API void hnl_curve_free(hnl_curve* c);
HNL_API size_t hnl_curve_arc_count(const hnl_curve* c);
/* Real endpoints and number of traced points of arc k (upper half). */
HNL_API hnl_status hnl_curve_arc(const hnl_curve* c, size_t k, double* a, double* a_prime, size_t* points);
/* Point j of arc k with its linear density rho. */
HNL_API hnl_status hnl_curve_arc_point(const hnl_curve* c, size_t k, size_t j, double* x, double* y, double* rho);
HNL_API size_t hnl_curve_sigma_count(const hnl_curve* c);
HNL_API hnl_status hnl_curve_sigma_interval(const hnl_curve* c, size_t k, double* lo, double* hi);
HNL_API hnl_status hnl_curve_mass(const hnl_curve* c, double* sigma_mass, double* arc_mass);
HNL_API hnl_status hnl_curve_distance(const hnl_curve* c, double re, double im, double* distance);
/* Limit-measure integral of exp(-|z - center|^2 / (2 width^2)). */
HNL_API hnl_status hnl_curve_gaussian_integral(const hnl_curve* c, double center_re, double center_im,
                                               double width, double* value);
/* g1 = min over the real line of gamma, g2 = max over supp dN of gamma. */
HNL_API hnl_status hnl_critical_couplings(const hnl_ids* ids, double mean_log_c, double* g1, double* g2);

/* ---- lab ---- */

typedef struct hnl_run_options {
  const char* config_path;
  const char* out_dir;
  int has_seed_override;
  uint64_t seed_override;
  unsigned jobs;
} hnl_run_options;

/* Runs one pipeline command ("sample", "spectrum", "ids", "lyapunov",
 * "curve", "verify", "compare"). A failed verification returns
 * HNL_ERR_VERIFICATION with the report still available. */
HNL_API hnl_status hnl_run(const char* command, const hnl_run_options* opts);
/* Human-readable report of the last hnl_run on this thread. */
HNL_API const char* hnl_last_report(void);

#ifdef __cplusplus
}
#endif

#endif /* HNLAB_HNLAB_H */
