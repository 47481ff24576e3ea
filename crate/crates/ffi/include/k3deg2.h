#ifndef K3DEG2_H
#define K3DEG2_H

/* Generated by cbindgen from crates/ffi. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Length of an a-vector.
 */
#define K3_NR 24

typedef enum K3Status {
  K3_STATUS_OK = 0,
  K3_STATUS_NULL_POINTER = 1,
  K3_STATUS_INVALID_UTF8 = 2,
  K3_STATUS_PARSE = 3,
  /**
   * the input is well formed but outside the domain of the operation
   */
  K3_STATUS_VALIDATION = 4,
  K3_STATUS_PANIC = 5,
} K3Status;

/**
 * The integral-affine sphere B(a).
 */
typedef struct K3Sphere K3Sphere;

/**
 * A validated a-vector.
 */
typedef struct K3Vector K3Vector;

/**
 * Counts of a Kulikov triangulation.
 */
typedef struct K3Stats {
  uint64_t v;
  uint64_t e;
  uint64_t f;
  uint64_t v_equator;
  uint64_t e_equator;
  uint32_t charge;
  int64_t dsemistable_dimension;
  int64_t n_plus;
  int64_t n_minus;
} K3Stats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Owned by the
 * library; valid until the next failing call.
 */
const char *k3_last_error(void);

/**
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void k3_string_free(char *s);

/**
 * Parse 24 comma-separated integers.
 *
 * # Safety
 * `s` must be a NUL-terminated string; `out` must be writable.
 */
enum K3Status k3_vector_parse(const char *s, struct K3Vector **out);

/**
 * Build from 24 integers.
 *
 * # Safety
 * `values` must point to `K3_NR` integers; `out` must be writable.
 */
enum K3Status k3_vector_new(const int64_t *values, struct K3Vector **out);

/**
 * Complete a partial vector: zeros on `zeros`, `values[k]` at `indices[k]`,
 * the rest solved from the lattice relations.
 *
 * # Safety
 * The arrays must hold the stated number of elements; `out` must be writable.
 */
enum K3Status k3_vector_complete(const size_t *zeros,
                                 size_t n_zeros,
                                 const size_t *indices,
                                 const int64_t *values,
                                 size_t n_values,
                                 struct K3Vector **out);

/**
 * Copy the 24 entries into `out`.
 *
 * # Safety
 * `v` must be a live handle; `out` must have room for `K3_NR` integers.
 */
enum K3Status k3_vector_values(const struct K3Vector *v, int64_t *out);

/**
 * # Safety
 * `v` must come from this library and not have been freed.
 */
void k3_vector_free(struct K3Vector *v);

/**
 * The norm (v, v) of the preimage in N.
 *
 * # Safety
 * `v` must be a live handle; `out` must be writable.
 */
enum K3Status k3_vector_norm(const struct K3Vector *v, int64_t *out);

/**
 * The degeneration label, e.g. `^A18-`, as a new string.
 *
 * # Safety
 * `v` must be a live handle; `out` must be writable.
 */
enum K3Status k3_vector_label(const struct K3Vector *v, char **out);

/**
 * Statistics of the Kulikov triangulation (positive norm, parity valid).
 *
 * # Safety
 * `v` must be a live handle; `out` must be writable.
 */
enum K3Status k3_vector_kulikov(const struct K3Vector *v, struct K3Stats *out);

/**
 * Build B(a) for a vector of positive norm.
 *
 * # Safety
 * `v` must be a live handle; `out` must be writable.
 */
enum K3Status k3_sphere_build(const struct K3Vector *v, struct K3Sphere **out);

/**
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void k3_sphere_free(struct K3Sphere *s);

/**
 * Volume of B(a) as a fraction.
 *
 * # Safety
 * `s` must be a live handle; `num` and `den` must be writable.
 */
enum K3Status k3_sphere_volume(const struct K3Sphere *s, int64_t *num, int64_t *den);

/**
 * Number of singular points, with multiplicity.
 *
 * # Safety
 * `s` must be a live handle.
 */
size_t k3_sphere_charge(const struct K3Sphere *s);

/**
 * JSON description of the sphere and its singular locus.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum K3Status k3_sphere_json(const struct K3Sphere *s, char **out);

/**
 * SVG 1.1 picture of the base polygon.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum K3Status k3_sphere_svg(const struct K3Sphere *s, char **out);

/**
 * Number of elliptic subdiagrams of the given rank, optionally up to S3.
 * The first call runs the full enumeration.
 *
 * # Safety
 * `out` must be writable.
 */
enum K3Status k3_count_elliptic(size_t rank, bool modulo_s3, uint64_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* K3DEG2_H */
