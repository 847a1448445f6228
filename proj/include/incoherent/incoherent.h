// Copyright 2026 The incoherent Authors
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

/*
 * C interface to the incoherent library.
 *
 * Every object is an opaque handle created by an inc_* function and released
 * with the matching *_free. Functions return an inc_status; on failure the
 * thread-local message from inc_last_error() describes what went wrong and no
 * output handle is written. Complex data crosses the boundary as interleaved
 * (re, im) doubles; matrices are row-major.
 */
#ifndef INCOHERENT_INCOHERENT_H
#define INCOHERENT_INCOHERENT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(INC_BUILDING_LIBRARY)
#    define INC_API __declspec(dllexport)
#  else
#    define INC_API __declspec(dllimport)
#  endif
#else
#  define INC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum inc_status {
  INC_OK = 0,
  INC_ERR_DIMENSION = 1,
  INC_ERR_VALIDATION = 2,
  INC_ERR_CONVERGENCE = 3,
  INC_ERR_NOT_CP = 4,
  INC_ERR_ILL_CONDITIONED = 5,
  INC_ERR_INVALID_ARGUMENT = 6,
  INC_ERR_PARSE = 7,
  INC_ERR_INTERNAL = 8
} inc_status;

typedef enum inc_profile_kind {
  INC_PROFILE_UNIFORM = 0,
  INC_PROFILE_GAUSSIAN = 1,
  INC_PROFILE_SKEWED = 2
} inc_profile_kind;

typedef enum inc_nudft_method {
  INC_NUDFT_WEIGHTED_RIEMANN = 0,
  INC_NUDFT_LEAST_SQUARES = 1
} inc_nudft_method;

typedef struct inc_matrix inc_matrix;
typedef struct inc_superop inc_superop;
typedef struct inc_profile inc_profile;
typedef struct inc_qpt_report inc_qpt_report;
typedef struct inc_pairing inc_pairing;
typedef struct inc_samples inc_samples;
typedef struct inc_recovery inc_recovery;

INC_API const char* inc_version(void);
INC_API const char* inc_last_error(void);
INC_API const char* inc_status_name(inc_status status);

/* ---- matrices ---------------------------------------------------------- */

INC_API inc_status inc_matrix_create(size_t rows, size_t cols, const double* interleaved,
                                     inc_matrix** out);
/* Real-weighted Pauli-string sum, e.g. "0.785398 * ZZ - 0.1 * XI". */
INC_API inc_status inc_matrix_from_pauli(const char* expr, inc_matrix** out);
/* a + scale * b */
INC_API inc_status inc_matrix_axpy(const inc_matrix* a, double scale, const inc_matrix* b,
                                   inc_matrix** out);
/* out = a * b */
INC_API inc_status inc_matrix_multiply(const inc_matrix* a, const inc_matrix* b,
                                       inc_matrix** out);
INC_API size_t inc_matrix_rows(const inc_matrix* m);
INC_API size_t inc_matrix_cols(const inc_matrix* m);
/* Writes rows * cols * 2 doubles. */
INC_API inc_status inc_matrix_get(const inc_matrix* m, double* interleaved);
/* exp(-i H t) for Hermitian H. */
INC_API inc_status inc_expm_unitary(const inc_matrix* h, double t, inc_matrix** out);
INC_API inc_status inc_random_unitary(size_t dim, uint64_t seed, inc_matrix** out);
INC_API void inc_matrix_free(inc_matrix* m);

/* ---- superoperators ---------------------------------------------------- */

INC_API inc_status inc_superop_from_matrix(const inc_matrix* m, inc_superop** out);
INC_API inc_status inc_superop_from_unitary(const inc_matrix* u, inc_superop** out);
/* sum_k weights[k] conj(U_k) kron U_k */
INC_API inc_status inc_superop_rud(size_t n, const double* weights,
                                   const inc_matrix* const* unitaries, inc_superop** out);
/* Random-unitary channel from `members` Haar unitaries on `qubits` qubits. */
INC_API inc_status inc_superop_random_rud(size_t qubits, size_t members, uint64_t seed,
                                          inc_superop** out);
/* Channel from U(dw) = exp(-i (h0t + dw * k)) weighted by the profile. */
INC_API inc_status inc_superop_rf_channel(const inc_matrix* h0t, const inc_matrix* k,
                                          const inc_profile* profile, inc_superop** out);
INC_API size_t inc_superop_dim(const inc_superop* s);
/* The N^2 x N^2 matrix. */
INC_API inc_status inc_superop_matrix(const inc_superop* s, inc_matrix** out);
/* N^2 eigenvalues, ordered by real then imaginary part descending. */
INC_API inc_status inc_superop_eigenvalues(const inc_superop* s, double* interleaved);
/* N^2 Choi eigenvalues, descending. */
INC_API inc_status inc_superop_choi_eigenvalues(const inc_superop* s, double* values);
INC_API inc_status inc_superop_is_cp(const inc_superop* s, double tol, int* is_cp,
                                     double* min_eigenvalue);
/* rank_tol < 0 selects the default relative cutoff. Fails with INC_ERR_NOT_CP
   for non-CP maps. */
INC_API inc_status inc_superop_kraus_count(const inc_superop* s, double rank_tol,
                                           size_t* count);
INC_API inc_status inc_superop_cp_filter(const inc_superop* s, double tol, inc_superop** out,
                                         double* removed_weight);
/* max |S|I> - |I>| and max |<<I|S - <<I|| */
INC_API inc_status inc_superop_unitality(const inc_superop* s, double* unital_error,
                                         double* trace_error);
INC_API void inc_superop_free(inc_superop* s);

/* ---- RF profiles ------------------------------------------------------- */

/* Weights are normalized by their sum; deltas must be strictly increasing. */
INC_API inc_status inc_profile_create(size_t n, const double* deltas, const double* weights,
                                      inc_profile** out);
INC_API inc_status inc_profile_synthetic(inc_profile_kind kind, double center, double width,
                                         double skew, size_t n_points, inc_profile** out);
INC_API size_t inc_profile_size(const inc_profile* p);
INC_API inc_status inc_profile_get(const inc_profile* p, double* deltas, double* weights);
/* Any output pointer may be NULL. */
INC_API inc_status inc_profile_metrics(const inc_profile* p, double* mean, double* std,
                                       double* skewness, double* clipped_mass);
/* f(k) = sum_b p_b exp(-i k dw_b) at n points; writes 2n doubles. */
INC_API inc_status inc_forward_nudft(const inc_profile* p, size_t n, const double* ks,
                                     double* interleaved);
INC_API void inc_profile_free(inc_profile* p);

/* ---- process tomography ------------------------------------------------ */

/* u_ab: 4x4 unitary on system (first factor) and environment. */
INC_API inc_status inc_qpt_run(const inc_matrix* u_ab, double alpha, double beta, double gamma,
                               int correlated, int cp_filter, double cp_tol,
                               inc_qpt_report** out);
INC_API inc_status inc_qpt_superop(const inc_qpt_report* r, inc_superop** out);
/* Writes 4 descending values. */
INC_API inc_status inc_qpt_choi_eigenvalues(const inc_qpt_report* r, double* values);
INC_API int inc_qpt_is_cp(const inc_qpt_report* r);
INC_API double inc_qpt_min_choi_eigenvalue(const inc_qpt_report* r);
/* Returns 0 and leaves *count untouched when the map is not CP. */
INC_API int inc_qpt_kraus_count(const inc_qpt_report* r, size_t* count);
/* Returns 0 when no CP filter ran. */
INC_API int inc_qpt_removed_weight(const inc_qpt_report* r, double* weight);
INC_API double inc_qpt_condition_number(const inc_qpt_report* r);
INC_API void inc_qpt_report_free(inc_qpt_report* r);

/* ---- spectral analysis ------------------------------------------------- */

/* Demonstration H0t and K for 2-4 qubits; coupling_ratio < 0 picks the default. */
INC_API inc_status inc_demo_model(size_t qubits, double coupling_ratio, inc_matrix** h0t,
                                  inc_matrix** k);
INC_API inc_status inc_pair_eigenvalues(const inc_superop* s, const inc_matrix* h0t,
                                        const inc_matrix* k, double match_tol,
                                        double degeneracy_tol, inc_pairing** out);
INC_API size_t inc_pairing_size(const inc_pairing* p);
/* Any output pointer may be NULL. lambda_* receive 2 doubles each. */
INC_API inc_status inc_pairing_entry(const inc_pairing* p, size_t index, size_t* j, size_t* m,
                                     double* lambda_measured, double* lambda_unperturbed,
                                     double* k_jm, double* distance, int* degenerate);
INC_API size_t inc_pairing_warning_count(const inc_pairing* p);
INC_API const char* inc_pairing_warning(const inc_pairing* p, size_t index);
INC_API void inc_pairing_free(inc_pairing* p);

INC_API inc_status inc_build_samples(const inc_pairing* p, inc_samples** out);
/* Samples supplied directly; must be sorted by k. */
INC_API inc_status inc_samples_create(size_t n, const double* ks, const double* f_interleaved,
                                      inc_samples** out);
INC_API size_t inc_samples_size(const inc_samples* s);
INC_API inc_status inc_samples_get(const inc_samples* s, double* ks, double* f_interleaved);
INC_API double inc_samples_symmetry_error(const inc_samples* s);
INC_API double inc_samples_window_span(const inc_samples* s);
INC_API double inc_samples_resolution(const inc_samples* s);
INC_API size_t inc_samples_warning_count(const inc_samples* s);
INC_API const char* inc_samples_warning(const inc_samples* s, size_t index);
INC_API void inc_samples_free(inc_samples* s);

/* ridge < 0 selects the default 1e-6 * n_samples. */
INC_API inc_status inc_inverse_nudft(const inc_samples* s, double dw_min, double dw_max,
                                     size_t n_bins, inc_nudft_method method, double ridge,
                                     inc_recovery** out);
INC_API inc_status inc_recovery_profile(const inc_recovery* r, inc_profile** out);
INC_API double inc_recovery_imag_residual(const inc_recovery* r);
INC_API double inc_recovery_clipped_mass(const inc_recovery* r);
INC_API double inc_recovery_symmetry_error(const inc_recovery* r);
/* Returns 0 for methods without a condition number. */
INC_API int inc_recovery_condition_number(const inc_recovery* r, double* condition);
INC_API size_t inc_recovery_warning_count(const inc_recovery* r);
INC_API const char* inc_recovery_warning(const inc_recovery* r, size_t index);
INC_API void inc_recovery_free(inc_recovery* r);

#ifdef __cplusplus
}
#endif

#endif /* INCOHERENT_INCOHERENT_H */
