/*
 * orlicz_radius: numerical radius computation and verification of an
 * Orlicz-function upper-bound catalogue for complex matrices.
 *
 * C API over the C++ core: opaque handles, integer status codes, and JSON
 * strings for the structured results. Every function returns ORX_OK (0) on
 * success; on failure it returns a nonzero status and orx_last_error()
 * describes the problem for the calling thread.
 *
 * Strings returned through char** out parameters are heap-allocated; release
 * them with orx_string_free().
 */

#ifndef ORLICZ_RADIUS_H
#define ORLICZ_RADIUS_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define ORX_OK 0
#define ORX_ERR_INVALID_ARGUMENT 1
#define ORX_ERR_DIMENSION 2
#define ORX_ERR_NOT_HERMITIAN 3
#define ORX_ERR_NOT_PSD 4
#define ORX_ERR_DOMAIN 5
#define ORX_ERR_OVERFLOW 6
#define ORX_ERR_IO 7
#define ORX_ERR_PARSE 8
#define ORX_ERR_UNKNOWN_CASE 9
#define ORX_ERR_NOT_APPLICABLE 10
#define ORX_ERR_INTERNAL 11

typedef struct orx_matrix orx_matrix; /* dense square complex matrix, n in 1..64 */
typedef struct orx_phi orx_phi;       /* scalar Orlicz function */

const char* orx_version(void);

/* Thread-local message of the last failing call on this thread. */
const char* orx_last_error(void);

void orx_string_free(char* s);

/* ------------------------------------------------------------------ */
/* Matrices                                                            */

/* entries: n*n interleaved (re, im) pairs, row-major. */
int orx_matrix_create(int n, const double* entries, orx_matrix** out);
int orx_matrix_load(const char* path, orx_matrix** out); /* JSON or text format */
int orx_matrix_save_json(const orx_matrix* m, const char* path);
int orx_matrix_save_text(const orx_matrix* m, const char* path);
int orx_matrix_dim(const orx_matrix* m, int* n);
int orx_matrix_get(const orx_matrix* m, int row, int col, double* re, double* im);
void orx_matrix_free(orx_matrix* m);

/* Seeded ensemble draw; spec is the ensemble JSON
 * {"family":..., "n":..., "count":..., "seed":..., "params":{...}}. */
int orx_generate(const char* ensemble_json, int index, orx_matrix** out);

/* ------------------------------------------------------------------ */
/* Linear algebra                                                      */

int orx_operator_norm(const orx_matrix* m, double* out);
int orx_abs_op(const orx_matrix* m, orx_matrix** out);
/* values: caller-allocated array of n doubles; filled descending. */
int orx_hermitian_eigenvalues(const orx_matrix* m, double* values);

/* ------------------------------------------------------------------ */
/* Numerical radius                                                    */

typedef struct {
    double value;
    double theta_star;
    double certified_error;
    int grid_points;
    int refinements;
} orx_radius_result;

/* grid <= 0 and tol <= 0 select the defaults (1024, 1e-9). */
int orx_numerical_radius(const orx_matrix* m, int grid, double tol, orx_radius_result* out);
int orx_rotation_support(const orx_matrix* m, double theta, double* out);
int orx_radius_oracle(const orx_matrix* m, long long samples, uint64_t seed, double* out);
/* thetas/re/im: caller-allocated arrays of length points. */
int orx_range_boundary(const orx_matrix* m, int points, double* thetas, double* re, double* im);

/* ------------------------------------------------------------------ */
/* Orlicz functions                                                    */

/* spec: "power:p=2" | "expm1" | "powerlog:p=1" | "expsq" | "table:file.csv" */
int orx_phi_create(const char* spec, orx_phi** out);
void orx_phi_free(orx_phi* phi);
int orx_phi_eval(const orx_phi* phi, double t, double* out);
int orx_phi_inverse(const orx_phi* phi, double y, double tol, double* out);
/* Axiom / sub-multiplicativity reports as JSON. */
int orx_phi_check_axioms(const orx_phi* phi, const double* grid, int len, char** out_json);
int orx_phi_check_submultiplicative(const orx_phi* phi, const double* grid, int len, char** out_json);

/* ------------------------------------------------------------------ */
/* Bound catalogue                                                     */

int orx_catalogue_json(char** out_json);

/* case_spec: "id" or "id[phi=expm1;alpha=0.5]".
 * s may be NULL for single-operator cases. norm_cap > 0 rescales inputs to
 * that operator norm. Result: evaluation JSON with the chain, slacks,
 * pass flags and recorded quantities. */
int orx_evaluate_bound(const char* case_spec, const orx_matrix* t, const orx_matrix* s, double tol_abs,
                       double tol_rel, double norm_cap, char** out_json);

/* Vector-lemma cases: inputs derived deterministically from (t, seed). */
int orx_evaluate_vector_lemma(const char* case_spec, const orx_matrix* t, uint64_t seed, double tol_abs,
                              double tol_rel, char** out_json);

/* ------------------------------------------------------------------ */
/* Verification suites                                                 */

int orx_default_suite_config(char** out_json);
int orx_selftest_suite_config(char** out_json);

/* jobs <= 0 selects the hardware concurrency. */
int orx_run_suite(const char* config_json, int jobs, char** out_report_json);
int orx_report_to_csv(const char* report_json, char** out_csv);
int orx_report_violations(const char* report_json, long long* out);
/* Report with the execution block (wall time, jobs) stripped, for
 * byte-for-byte determinism comparisons. */
int orx_report_strip_execution(const char* report_json, char** out_json);

/* ------------------------------------------------------------------ */
/* Comparison and fuzzing                                              */

/* bounds: comma-separated case specs. Emits one CSV row per draw with the
 * true w and each bound's effective upper estimate. */
int orx_compare(const char* ensemble_json, const char* bounds, char** out_csv);

/* Random search maximizing LHS/RHS of one case. Exactly one of seconds or
 * max_iters must be positive. Result JSON carries the best ratio, the
 * witness matrices and the reproduction seed. */
int orx_fuzz(const char* case_spec, double seconds, long long max_iters, uint64_t seed, char** out_json);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* ORLICZ_RADIUS_H */
