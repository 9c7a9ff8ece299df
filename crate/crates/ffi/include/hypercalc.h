#ifndef HYPERCALC_H
#define HYPERCALC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum HcStatus {
  HC_STATUS_OK = 0,
  HC_STATUS_NULL_POINTER = 1,
  HC_STATUS_INVALID_ARGUMENT = 2,
  HC_STATUS_INVALID_UTF8 = 3,
  HC_STATUS_PARSE_ERROR = 4,
  HC_STATUS_NEAR_REAL_AXIS = 5,
  HC_STATUS_NON_FINITE = 6,
  HC_STATUS_DEGREE_CAP_EXCEEDED = 7,
  HC_STATUS_MODE_MISMATCH = 8,
  HC_STATUS_OUT_OF_RANGE = 9,
  HC_STATUS_PANIC = 10,
} HcStatus;

/**
 * A parsed expression.
 */
typedef struct HcExpr HcExpr;

/**
 * An expanded polynomial; terms are kept in graded-lex order.
 */
typedef struct HcPolynomial HcPolynomial;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null after a
 * successful one. Valid until the next call into the library on the same
 * thread.
 */
const char *hc_last_error_message(void);

/**
 * Releases a string returned by the library.
 *
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void hc_string_free(char *s);

/**
 * `out = a * b` for quaternions. `out` may alias an input.
 *
 * # Safety
 * Each pointer must be null or reference four doubles.
 */
enum HcStatus hc_qmul(const double *a, const double *b, double *out);

/**
 * `out = a * b` for octonions. `out` may alias an input.
 *
 * # Safety
 * Each pointer must be null or reference eight doubles.
 */
enum HcStatus hc_omul(const double *a, const double *b, double *out);

/**
 * Splits `q = x0 + iota * x` with `x >= eps`.
 *
 * # Safety
 * `q` and `iota` must be null or reference four doubles; `x0` and `x` must
 * be null or writable.
 */
enum HcStatus hc_polar(const double *q, double eps, double *x0, double *x, double *iota);

/**
 * Row-major 4x4 real matrix of a barred operator.
 *
 * # Safety
 * `op` and `matrix` must be null or reference sixteen doubles.
 */
enum HcStatus hc_barred_to_matrix(const double *op, double *matrix);

/**
 * Barred operator of a row-major 4x4 real matrix.
 *
 * # Safety
 * `matrix` and `op` must be null or reference sixteen doubles.
 */
enum HcStatus hc_barred_from_matrix(const double *matrix, double *op);

/**
 * `out = a ∘ b`, i.e. `b` is applied first.
 *
 * # Safety
 * Each pointer must be null or reference sixteen doubles.
 */
enum HcStatus hc_barred_compose(const double *a, const double *b, double *out);

/**
 * # Safety
 * `op` must be null or reference sixteen doubles; `p` and `out` four.
 */
enum HcStatus hc_barred_apply(const double *op, const double *p, double *out);

/**
 * Parses a NUL-terminated expression. On success `*out` receives a handle.
 *
 * # Safety
 * `src` must be null or a NUL-terminated string; `out` must be null or
 * writable.
 */
enum HcStatus hc_expr_parse(const char *src, bool octonion, struct HcExpr **out);

/**
 * # Safety
 * `expr` must be null or a handle from [`hc_expr_parse`] not yet freed.
 */
void hc_expr_free(struct HcExpr *expr);

/**
 * Evaluates a quaternion-mode expression at `q`.
 *
 * # Safety
 * `expr` must be a live handle or null; `q` and `out` four doubles or null.
 */
enum HcStatus hc_expr_eval(const struct HcExpr *expr, const double *q, double *out);

/**
 * Evaluates an expression at an octonion.
 *
 * # Safety
 * `expr` must be a live handle or null; `o` and `out` eight doubles or null.
 */
enum HcStatus hc_expr_eval_octonion(const struct HcExpr *expr, const double *o, double *out);

/**
 * Expands an expression into a polynomial handle.
 *
 * # Safety
 * `expr` must be a live handle or null; `out` must be null or writable.
 */
enum HcStatus hc_expr_to_polynomial(const struct HcExpr *expr, struct HcPolynomial **out);

/**
 * Numeric local Cauchy-Riemann residual `∂₀f + ι∂ₓf` of a quaternion-mode
 * expression at `q`, with central differences of step `h`.
 *
 * # Safety
 * `expr` must be a live handle or null; `q` and `residual` four doubles or
 * null; `norm` null or writable.
 */
enum HcStatus hc_local_cr_residual(const struct HcExpr *expr,
                                   const double *q,
                                   double h,
                                   double axis_eps,
                                   double *residual,
                                   double *norm);

/**
 * # Safety
 * `poly` must be null or a handle from [`hc_expr_to_polynomial`] not yet
 * freed.
 */
void hc_poly_free(struct HcPolynomial *poly);

/**
 * # Safety
 * `poly` must be a live handle or null; `out` null or writable.
 */
enum HcStatus hc_poly_term_count(const struct HcPolynomial *poly, size_t *out);

/**
 * Term `n` in graded-lex order: exponents of `x0..x3` and the coefficient.
 *
 * # Safety
 * `poly` must be a live handle or null; `exponents` null or four writable
 * `uint32_t`; `coeff` null or four writable doubles.
 */
enum HcStatus hc_poly_term(const struct HcPolynomial *poly,
                           size_t n,
                           uint32_t *exponents,
                           double *coeff);

/**
 * # Safety
 * `poly` must be a live handle or null; `q` and `out` four doubles or null.
 */
enum HcStatus hc_poly_eval(const struct HcPolynomial *poly, const double *q, double *out);

/**
 * JSON list of `{index, coeff}` terms. Free the result with
 * [`hc_string_free`].
 *
 * # Safety
 * `poly` must be a live handle or null; `out` null or writable.
 */
enum HcStatus hc_poly_to_json(const struct HcPolynomial *poly, char **out);

/**
 * Solves the derivative constraints for the given orders and returns the
 * report as JSON. Free the result with [`hc_string_free`].
 *
 * # Safety
 * `orders` must be null or reference `n_orders` values; `out` null or
 * writable.
 */
enum HcStatus hc_solve_global_json(bool barred,
                                   const uint32_t *orders,
                                   size_t n_orders,
                                   char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HYPERCALC_H */
