#ifndef ENTVIR_H
#define ENTVIR_H

/* C interface to the entanglement-Virasoro pipeline. All functions return an
 * entvir_status; results come back through out-parameters. Handles are opaque
 * and freed with the matching *_free call. On error the thread-local message
 * from entvir_last_error() describes what went wrong.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(__cplusplus)
extern "C" {
#endif

typedef enum entvir_status {
  ENTVIR_OK = 0,
  ENTVIR_ERR_INVALID = 1, /* contract violation: bad sizes, unknown preset... */
  ENTVIR_ERR_NUMERIC = 2, /* convergence / pairing / matching failure */
  ENTVIR_ERR_NOMEM = 3
} entvir_status;

typedef struct entvir_model entvir_model;
typedef struct entvir_run entvir_run;
typedef struct entvir_tables entvir_tables;

const char* entvir_version(void);
const char* entvir_last_error(void);
void entvir_string_free(char* s);

/* ---- models ---- */

int entvir_model_preset(const char* name, entvir_model** out);
int entvir_model_custom(double lambda, double gamma, entvir_model** out);
void entvir_model_free(entvir_model* m);
double entvir_model_lambda(const entvir_model* m);
double entvir_model_gamma(const entvir_model* m);
/* 0 = not critical, 1 = Ising class, 2 = boson class */
int entvir_model_universality(const entvir_model* m);
double entvir_model_central_charge(const entvir_model* m);
double entvir_model_dispersion(const entvir_model* m, double k);

/* ---- one diagonalized interval ---- */

/* sites must be even; num_states Schmidt states are kept. with_vectors != 0
 * retains the canonical transformation (needed for matrix elements). */
int entvir_run_compute(const entvir_model* m, int64_t sites, int32_t num_states,
                       int with_vectors, entvir_run** out);
void entvir_run_free(entvir_run* r);
int64_t entvir_run_sites(const entvir_run* r);
int32_t entvir_run_num_states(const entvir_run* r);
double entvir_run_entropy(const entvir_run* r);
double entvir_run_gap(const entvir_run* r);
/* Fills up to cap single-particle energies (ascending); returns the count
 * available. */
int64_t entvir_run_single_particle(const entvir_run* r, double* buf,
                                   int64_t cap);
/* Entanglement energies E_alpha of the kept states. */
int32_t entvir_run_energies(const entvir_run* r, double* buf, int32_t cap);
/* Schmidt weights lambda_alpha^2. */
int32_t entvir_run_weights(const entvir_run* r, double* buf, int32_t cap);
/* h_alpha = (2l/pi)(E_alpha - E_1); l = log(sites/epsilon). */
int32_t entvir_run_rescaled(const entvir_run* r, double epsilon, double* buf,
                            int32_t cap);
/* Occupied-mode indices of state alpha; returns the occupation size. */
int32_t entvir_run_occupation(const entvir_run* r, int32_t alpha, int64_t* buf,
                              int32_t cap);

/* ---- epsilon extrapolation ---- */

/* Least squares of 1/gap against log(size); epsilon = exp(-intercept/slope).
 * Any of the three out-pointers may be NULL. */
int entvir_fit_epsilon(const int64_t* sizes, const double* gaps, int32_t count,
                       double* epsilon, double* slope, double* intercept);
/* Computes the gaps itself (spectrum-only runs) over the given sizes. */
int entvir_fit_epsilon_sizes(const entvir_model* m, const int64_t* sizes,
                             int32_t count, double* epsilon, double* slope,
                             double* intercept);

/* ---- operator tables ---- */

/* Lattice H_n tables for each n in modes[] at the run's size, matched and
 * phase-aligned against the exact boundary-CFT tables. Needs a run computed
 * with vectors. */
int entvir_tables_compute(const entvir_run* r, double epsilon,
                          const int32_t* modes, int32_t num_modes,
                          entvir_tables** out);
void entvir_tables_free(entvir_tables* t);
int32_t entvir_tables_count(const entvir_tables* t);
/* kind: 0 raw lattice, 1 aligned lattice, 2 matched CFT, 3 corrections.
 * Writes k*k complex entries as interleaved (re, im) row-major doubles. */
int entvir_tables_get(const entvir_tables* t, int32_t mode, int32_t kind,
                      double* buf, int64_t cap);
/* Diagonal gauge (re, im per state). */
int entvir_tables_gauge(const entvir_tables* t, int32_t mode, double* buf,
                        int64_t cap);
/* Tower-state index matched to each lattice state. */
int entvir_tables_matching(const entvir_tables* t, int32_t* buf, int64_t cap);
double entvir_tables_l(const entvir_tables* t);

/* Exact CFT table of H_n (hermitian = 1) or L_n (hermitian = 0) over the K
 * lowest tower states, as a JSON array of {num, den, sqrt2_num, sqrt2_den}
 * entries; universality 1 = Ising, 2 = boson. Free with entvir_string_free. */
int entvir_cft_table_json(int universality, int n, int32_t k, int hermitian,
                          char** out);

/* ---- dense Fock-space oracle ---- */

typedef struct entvir_oracle_report {
  double max_weight_deviation;
  double max_vector_residual;
  double max_orthonormality_defect;
  double max_element_deviation;
  double worst;
} entvir_oracle_report;

int entvir_oracle_crosscheck(const entvir_model* m, int64_t sites,
                             const int32_t* modes, int32_t num_modes,
                             int32_t num_states, double epsilon,
                             entvir_oracle_report* out);

/* ---- misc ---- */

/* S_A fit: 3 * slope of entropy against log size. */
int entvir_fit_central_charge(const entvir_model* m, const int64_t* sizes,
                              int32_t count, double* c_out);

#if defined(__cplusplus)
}
#endif

#endif /* ENTVIR_H */
