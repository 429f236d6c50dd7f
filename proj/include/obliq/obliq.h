#ifndef OBLIQ_OBLIQ_H
#define OBLIQ_OBLIQ_H

/*
 * C interface to the obliq library.
 *
 * Objects are opaque handles created by *_create / *_parse functions and
 * released with the matching *_destroy. Every fallible call returns an
 * obliq_status; on failure a message is available from
 * obliq_last_error_message() on the same thread until the next call.
 * Strings returned through char** are owned by the caller and released with
 * obliq_string_free().
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(OBLIQ_BUILDING_LIBRARY)
#    define OBLIQ_API __declspec(dllexport)
#  else
#    define OBLIQ_API __declspec(dllimport)
#  endif
#else
#  define OBLIQ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum obliq_status {
  OBLIQ_OK = 0,
  OBLIQ_ERR_INVALID_ARGUMENT = 1,
  OBLIQ_ERR_DIMENSION_MISMATCH = 2,
  OBLIQ_ERR_PARSE = 3,
  OBLIQ_ERR_NOT_PSD = 4,
  OBLIQ_ERR_NOT_CONTAINED = 5,
  OBLIQ_ERR_NO_SOLUTION = 6,
  OBLIQ_ERR_INCOMPATIBLE = 7,
  OBLIQ_ERR_SINGULAR = 8,
  OBLIQ_ERR_RANGE_MISMATCH = 9,
  OBLIQ_ERR_NOT_IN_RANGE = 10,
  OBLIQ_ERR_NOT_EXTENDABLE = 11,
  OBLIQ_ERR_WEIGHT_MISMATCH = 12,
  OBLIQ_ERR_IDENTITY_VIOLATION = 13,
  OBLIQ_ERR_INTERNAL = 99
} obliq_status;

typedef enum obliq_formula {
  OBLIQ_FORMULA_BLOCK = 0,
  OBLIQ_FORMULA_PINV = 1,
  OBLIQ_FORMULA_INVERTIBLE = 2
} obliq_formula;

typedef struct obliq_tolerance {
  double rank_rel;
  double eq_abs;
  double psd_neg;
} obliq_tolerance;

typedef struct obliq_matrix obliq_matrix;
typedef struct obliq_weight obliq_weight;
typedef struct obliq_subspace obliq_subspace;

typedef struct obliq_compat_info {
  int compatible;
  int sum_check;
  int chain[6];
  int implications_hold;
  size_t dim_n;
} obliq_compat_info;

OBLIQ_API const char* obliq_version(void);
OBLIQ_API const char* obliq_status_name(obliq_status status);
OBLIQ_API const char* obliq_last_error_message(void);
OBLIQ_API obliq_tolerance obliq_default_tolerance(void);
OBLIQ_API void obliq_string_free(char* s);

/* Matrices: dense, row-major on the boundary. */
OBLIQ_API obliq_status obliq_matrix_create(size_t rows, size_t cols, const double* data,
                                           obliq_matrix** out);
OBLIQ_API obliq_status obliq_matrix_parse_json(const char* text, obliq_matrix** out);
OBLIQ_API obliq_status obliq_matrix_to_json(const obliq_matrix* m, char** out);
OBLIQ_API size_t obliq_matrix_rows(const obliq_matrix* m);
OBLIQ_API size_t obliq_matrix_cols(const obliq_matrix* m);
OBLIQ_API obliq_status obliq_matrix_copy_data(const obliq_matrix* m, double* out, size_t len);
OBLIQ_API void obliq_matrix_destroy(obliq_matrix* m);

/* PSD weights. tol may be NULL for defaults everywhere below. */
OBLIQ_API obliq_status obliq_weight_create(const obliq_matrix* a, const obliq_tolerance* tol,
                                           obliq_weight** out);
OBLIQ_API size_t obliq_weight_dim(const obliq_weight* w);
OBLIQ_API size_t obliq_weight_rank(const obliq_weight* w);
OBLIQ_API void obliq_weight_destroy(obliq_weight* w);

/* Subspaces, canonicalised to an orthonormal basis. */
OBLIQ_API obliq_status obliq_subspace_from_span(const obliq_matrix* vectors,
                                                const obliq_tolerance* tol,
                                                obliq_subspace** out);
OBLIQ_API obliq_status obliq_subspace_parse_json(const char* text, const obliq_tolerance* tol,
                                                 obliq_subspace** out);
OBLIQ_API size_t obliq_subspace_dim(const obliq_subspace* s);
OBLIQ_API size_t obliq_subspace_ambient(const obliq_subspace* s);
OBLIQ_API obliq_status obliq_subspace_basis(const obliq_subspace* s, obliq_matrix** out);
OBLIQ_API void obliq_subspace_destroy(obliq_subspace* s);

/* Oblique projections. */
OBLIQ_API obliq_status obliq_is_compatible(const obliq_weight* a, const obliq_subspace* s,
                                           const obliq_tolerance* tol, int* out);
OBLIQ_API obliq_status obliq_project(const obliq_weight* a, const obliq_subspace* s,
                                     obliq_formula formula, const obliq_tolerance* tol,
                                     obliq_matrix** out);
OBLIQ_API obliq_status obliq_compat(const obliq_weight* a, const obliq_subspace* s,
                                    const obliq_tolerance* tol, obliq_compat_info* out);

/* Douglas equation A X = B. least_squares != 0 skips the feasibility gate. */
OBLIQ_API obliq_status obliq_douglas(const obliq_matrix* a, const obliq_matrix* b,
                                     const obliq_tolerance* tol, int least_squares,
                                     obliq_matrix** d, double* norm_sq, double* residual);
OBLIQ_API obliq_status obliq_minimal_lambda(const obliq_matrix* a, const obliq_matrix* b,
                                            const obliq_tolerance* tol, double* out);

/* Operator range B(A^{1/2}). Vectors have length dim(a). */
OBLIQ_API obliq_status obliq_range_inner(const obliq_weight* a, const double* u,
                                         const double* v, const obliq_tolerance* tol,
                                         double* out);
OBLIQ_API obliq_status obliq_qas(const obliq_weight* a, const obliq_subspace* s,
                                 const obliq_tolerance* tol, obliq_matrix** chart);
OBLIQ_API obliq_status obliq_theta(const obliq_weight* a, const obliq_matrix* b,
                                   const obliq_tolerance* tol, obliq_matrix** chart);

/* Minimal-seminorm interpolant for A = T^T T. minimizer has length n. */
OBLIQ_API obliq_status obliq_spline(const obliq_matrix* t_factor, const obliq_subspace* s,
                                    const double* x, const obliq_tolerance* tol,
                                    double* minimizer, double* value, int* unique);

/* Batch job described as a JSON object (see README); report_json may be NULL. */
OBLIQ_API obliq_status obliq_run_job(const char* job_json, char** report_json, int* exit_code);

#ifdef __cplusplus
}
#endif

#endif /* OBLIQ_OBLIQ_H */
