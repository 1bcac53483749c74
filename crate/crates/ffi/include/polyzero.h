#ifndef POLYZERO_H
#define POLYZERO_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum PzStatus {
  PZ_STATUS_OK = 0,
  PZ_STATUS_NULL_POINTER = 1,
  PZ_STATUS_INVALID_ARGUMENT = 2,
  PZ_STATUS_PARSE = 3,
  PZ_STATUS_ZERO_POLYNOMIAL = 4,
  PZ_STATUS_NOT_DOMINANT = 5,
  // Zero on the integration curve, uncertified winding, singular point or
  // non-finite arithmetic.
  PZ_STATUS_NUMERICAL = 6,
  // Extremal construction or verification did not succeed.
  PZ_STATUS_CONSTRUCTION = 7,
  PZ_STATUS_PANIC = 8,
} PzStatus;

// Opaque zero census handle.
typedef struct PzCensus PzCensus;

// Opaque polynomial handle.
typedef struct PzPoly PzPoly;

typedef struct PzComplex {
  double re;
  double im;
} PzComplex;

// One zero of a census. `has_index` is 0 when the index could not be
// certified, and `index` is then meaningless.
typedef struct PzZero {
  struct PzComplex z;
  int64_t index;
  bool has_index;
  // Sign of the Jacobian at the zero: 1, -1 or 0 (singular).
  int8_t jacobian_sign;
  double residual;
} PzZero;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Static description of a status code. Never null.
const char *pz_status_message(enum PzStatus status);

// Message of the last failed call on this thread, or "" if none. Valid
// until the next failing call on the same thread.
const char *pz_last_error(void);

// Builds a polynomial from `len` terms `coeffs[i] z^{j[i]} zbar^{k[i]}`.
// Repeated index pairs are summed.
//
// # Safety
// `j`, `k` and `coeffs` must each point to `len` readable elements (they may
// be null when `len` is 0). `out` must be writable.
enum PzStatus pz_poly_from_terms(const size_t *j,
                                 const size_t *k,
                                 const struct PzComplex *coeffs,
                                 size_t len,
                                 struct PzPoly **out);

// Parses the text format (`j k re im` per line, `;` also separates lines).
//
// # Safety
// `text` must be a NUL-terminated string. `out` must be writable.
enum PzStatus pz_poly_parse(const char *text, struct PzPoly **out);

// Releases a polynomial. Null is ignored.
//
// # Safety
// `p` must come from this library and not have been freed.
void pz_poly_free(struct PzPoly *p);

// Value of the polynomial at `z`.
//
// # Safety
// `p` must be a live handle and `out` writable.
enum PzStatus pz_poly_eval(const struct PzPoly *p, struct PzComplex z, struct PzComplex *out);

// Total degree, degree in z and degree in zbar.
//
// # Safety
// `p` must be a live handle and the outputs writable.
enum PzStatus pz_poly_degrees(const struct PzPoly *p, size_t *deg, size_t *deg_z, size_t *deg_zbar);

// Inclusion radii `r0 <= r1`, `r0 < r2`. Fails with `NotDominant` when no
// top-degree coefficient dominates.
//
// # Safety
// `p` must be a live handle and the outputs writable.
enum PzStatus pz_bounds(const struct PzPoly *p, double *r0, double *r1, double *r2);

// Winding number of the polynomial along the circle `|z - center| = radius`.
//
// # Safety
// `p` must be a live handle and `out` writable.
enum PzStatus pz_winding_circle(const struct PzPoly *p,
                                struct PzComplex center,
                                double radius,
                                int64_t *out);

// Zero census in the disk `|z| < radius` with default Newton options.
//
// # Safety
// `p` must be a live handle and `out` writable.
enum PzStatus pz_roots(const struct PzPoly *p, double radius, struct PzCensus **out);

// Number of zeros in a census, 0 for null.
//
// # Safety
// `c` must be null or a live handle.
size_t pz_census_len(const struct PzCensus *c);

// Zero number `i`, ordered by real then imaginary part.
//
// # Safety
// `c` must be a live handle and `out` writable.
enum PzStatus pz_census_get(const struct PzCensus *c, size_t i, struct PzZero *out);

// Winding number on the census disk boundary and whether the index sum
// matches it.
//
// # Safety
// `c` must be a live handle and the outputs writable.
enum PzStatus pz_census_summary(const struct PzCensus *c, int64_t *total_winding, bool *certified);

// Releases a census. Null is ignored.
//
// # Safety
// `c` must come from this library and not have been freed.
void pz_census_free(struct PzCensus *c);

// Degree-n polynomial with exactly n^2 zeros, built on the adaptive schedule.
//
// # Safety
// `out` must be writable.
enum PzStatus pz_extremal(size_t n, struct PzPoly **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POLYZERO_H */
