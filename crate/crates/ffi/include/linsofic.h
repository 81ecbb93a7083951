#ifndef LINSOFIC_H
#define LINSOFIC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LsStatus {
  LS_STATUS_OK = 0,
  /**
   * Null pointer, bad UTF-8, or an out-of-range parameter.
   */
  LS_STATUS_INVALID_ARGUMENT = 1,
  LS_STATUS_PARSE = 2,
  /**
   * Input is well-formed but outside what the operation supports.
   */
  LS_STATUS_DOMAIN = 3,
  /**
   * A configured size cap was exceeded.
   */
  LS_STATUS_CAP = 4,
  /**
   * A checked inequality failed.
   */
  LS_STATUS_BOUND_VIOLATION = 5,
  LS_STATUS_NUMERICAL = 6,
  /**
   * A panic was caught at the boundary.
   */
  LS_STATUS_INTERNAL = 7,
} LsStatus;

/**
 * Spectral (probability) measure handle.
 */
typedef struct LsMeasure LsMeasure;

/**
 * Jordan spectrum handle.
 */
typedef struct LsSpectrum LsSpectrum;

/**
 * Character table handle.
 */
typedef struct LsTable LsTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or NULL. Do not free.
 */
const char *ls_last_error(void);

/**
 * Library version as a static string.
 */
const char *ls_version(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void ls_string_free(char *s);

/**
 * Parses a spectrum from JSON.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum LsStatus ls_spectrum_from_json(const char *json, struct LsSpectrum **out);

/**
 * # Safety
 * `s` must be NULL or a handle from this library, freed at most once.
 */
void ls_spectrum_free(struct LsSpectrum *s);

/**
 * Spectrum of the Kronecker product, stopping with `LS_STATUS_CAP` beyond `cap` distinct blocks.
 *
 * # Safety
 * `a` and `b` must be valid handles; `out` must be writable.
 */
enum LsStatus ls_spectrum_tensor(const struct LsSpectrum *a,
                                 const struct LsSpectrum *b,
                                 size_t cap,
                                 struct LsSpectrum **out);

/**
 * Serializes the spectrum to JSON.
 *
 * # Safety
 * `s` must be a valid handle; `out` must be writable.
 */
enum LsStatus ls_spectrum_to_json(const struct LsSpectrum *s, char **out);

/**
 * Dimension, eigenvalue-1 fraction, block fractions and distance to the identity, as JSON.
 *
 * # Safety
 * `s` must be a valid handle; `out` must be writable.
 */
enum LsStatus ls_spectrum_stats(const struct LsSpectrum *s, char **out);

/**
 * Parses a measure from JSON.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum LsStatus ls_measure_from_json(const char *json, struct LsMeasure **out);

/**
 * # Safety
 * `m` must be NULL or a handle from this library, freed at most once.
 */
void ls_measure_free(struct LsMeasure *m);

/**
 * Exact mass of the `n`-fold convolution at the identity, as `"p/q"`.
 *
 * # Safety
 * `m` must be a valid handle; `out` must be writable.
 */
enum LsStatus ls_measure_return_probability(const struct LsMeasure *m, uint64_t n, char **out);

/**
 * Parses and validates a character table from JSON.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum LsStatus ls_table_from_json(const char *json, struct LsTable **out);

/**
 * Built-in table by name (`S3`, `Q8`, `D4`, `A4`, `S4`, `Z<n>`).
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum LsStatus ls_table_builtin(const char *name, struct LsTable **out);

/**
 * Table of the abelian group with the given cyclic factors.
 *
 * # Safety
 * `factors` must point to `len` readable values; `out` must be writable.
 */
enum LsStatus ls_table_abelian(const uint64_t *factors, size_t len, struct LsTable **out);

/**
 * # Safety
 * `t` must be NULL or a handle from this library, freed at most once.
 */
void ls_table_free(struct LsTable *t);

/**
 * Optimal separation constant over the complex numbers with its witness, as JSON.
 *
 * # Safety
 * `t` must be a valid handle; `out` must be writable.
 */
enum LsStatus ls_kappa_complex(const struct LsTable *t, char **out);

/**
 * Regular-representation constant over `F_p` for a multiplication table given as JSON.
 *
 * # Safety
 * `mult_json` must be a NUL-terminated string; `out` must be writable.
 */
enum LsStatus ls_kappa_modp(const char *mult_json, uint64_t p, char **out);

/**
 * Planned iteration counts for targets given as `"p/q"` strings, as JSON.
 *
 * # Safety
 * Both strings must be NUL-terminated; `out` must be writable.
 */
enum LsStatus ls_plan(const char *epsilon, const char *delta, double c2, char **out);

/**
 * `int_a^b sin(nt)/sin(t) dt` by the exact recursion.
 *
 * # Safety
 * `out` must be writable.
 */
enum LsStatus ls_integral(int64_t n, double a, double b, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LINSOFIC_H */
