#ifndef KRUGLOV_H
#define KRUGLOV_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum KrStatus {
  KR_STATUS_OK = 0,
  KR_STATUS_INVALID_ARGUMENT = 1,
  KR_STATUS_NEGATIVE_ENTRY = 2,
  KR_STATUS_INEXACT = 3,
  KR_STATUS_BUDGET = 4,
  KR_STATUS_TAIL_MASS = 5,
  KR_STATUS_PARSE = 6,
  KR_STATUS_IO = 7,
  KR_STATUS_NULL_POINTER = 8,
  KR_STATUS_PANIC = 9,
} KrStatus;

typedef enum KrVerdict {
  KR_VERDICT_PASS = 0,
  KR_VERDICT_FAIL = 1,
  KR_VERDICT_INCONCLUSIVE = 2,
} KrVerdict;

/**
 * Opaque handle to a discrete distribution.
 */
typedef struct KrDist KrDist;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after success.
 * The pointer stays valid until the next call on this thread.
 */
const char *kr_last_error(void);

/**
 * Library version as a static string.
 */
const char *kr_version(void);

/**
 * Law of `T_n a` for `a` written as comma-separated rationals, e.g. `"1,2,1/3"`.
 *
 * # Safety
 * `a` must be a NUL-terminated string and `out` a valid pointer.
 */
enum KrStatus kr_dist_t_n(const char *a, struct KrDist **out);

/**
 * Law of `H_m a`.
 *
 * # Safety
 * As for [`kr_dist_t_n`].
 */
enum KrStatus kr_dist_h_m(const char *a, size_t m, struct KrDist **out);

/**
 * Law of `K` applied to a variable with law `mu`; truncated mass up to
 * `tail_tol` is carried in the result's tail.
 *
 * # Safety
 * `mu` must be a live handle and `out` a valid pointer.
 */
enum KrStatus kr_dist_kruglov(const struct KrDist *mu, double tail_tol, struct KrDist **out);

/**
 * Parses `{"atoms":[{"v":"1/2","m":"1/3"},...],"tail":0}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum KrStatus kr_dist_from_json(const char *json, struct KrDist **out);

/**
 * # Safety
 * `d` must be a live handle and `out` a valid pointer.
 */
enum KrStatus kr_dist_to_json(const struct KrDist *d, char **out);

/**
 * Number of atoms, or 0 for a null handle.
 *
 * # Safety
 * `d` must be null or a live handle.
 */
size_t kr_dist_len(const struct KrDist *d);

/**
 * Value and mass of atom `i` (ascending by value) as doubles.
 *
 * # Safety
 * `d` must be a live handle; `value` and `mass` valid pointers.
 */
enum KrStatus kr_dist_atom(const struct KrDist *d, size_t i, double *value, double *mass);

/**
 * Atom `i` as strings: exact rationals as `p/q`, inexact values as decimals.
 *
 * # Safety
 * As for [`kr_dist_atom`].
 */
enum KrStatus kr_dist_atom_text(const struct KrDist *d, size_t i, char **value, char **mass);

/**
 * Unrepresented mass, or NaN for a null handle.
 *
 * # Safety
 * `d` must be null or a live handle.
 */
double kr_dist_tail(const struct KrDist *d);

/**
 * Bracket `lower <= P(X > tau) <= upper`; `tau` is a rational string.
 *
 * # Safety
 * `d` must be a live handle, `tau` a NUL-terminated string, `lower` and
 * `upper` valid pointers.
 */
enum KrStatus kr_dist_ccdf(const struct KrDist *d, const char *tau, double *lower, double *upper);

/**
 * # Safety
 * `d` must be a live handle and `out` a valid pointer.
 */
enum KrStatus kr_dist_mean(const struct KrDist *d, double *out);

/**
 * Norm of the decreasing rearrangement of `d` in the space named by
 * `spec` (`l1`, `linf`, `explog`, `orlicz:p`, `lorentz:<gauge>`,
 * `marcinkiewicz:<gauge>`). Unrepresented mass is placed at zero, so the
 * result is a lower bound when the tail is positive.
 *
 * # Safety
 * `d` must be a live handle, `spec` a NUL-terminated string, `out` valid.
 */
enum KrStatus kr_norm(const struct KrDist *d, const char *spec, double tol, double *out);

/**
 * Runs a verification claim (or `all`). `config` holds `key = value` lines
 * as accepted by the CLI's `--config`, or is null. On success `json`
 * receives the report (an array for `all`) and `verdict` the combined
 * verdict.
 *
 * # Safety
 * `claim` must be a NUL-terminated string, `config` null or one, `json`
 * and `verdict` valid pointers.
 */
enum KrStatus kr_run_claim(const char *claim, const char *config, char **json, int *verdict);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed once.
 */
void kr_string_free(char *s);

/**
 * # Safety
 * `d` must be null or a handle returned by this library, freed once.
 */
void kr_dist_free(struct KrDist *d);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KRUGLOV_H */
