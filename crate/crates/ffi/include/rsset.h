#ifndef RSSET_H
#define RSSET_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RssetStatus {
  RSSET_STATUS_OK = 0,
  RSSET_STATUS_NULL_POINTER = 1,
  RSSET_STATUS_INVALID_ARGUMENT = 2,
  RSSET_STATUS_ARITHMETIC = 3,
  RSSET_STATUS_PARSE = 4,
  RSSET_STATUS_BUDGET_EXCEEDED = 5,
  RSSET_STATUS_PRECONDITION = 6,
  RSSET_STATUS_OVERFLOW = 7,
  RSSET_STATUS_IO = 8,
  RSSET_STATUS_PANIC = 9,
} RssetStatus;

/**
 * A finite field.
 */
typedef struct RssetField RssetField;

/**
 * A point set of PG(n, q).
 */
typedef struct RssetPointSet RssetPointSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *rsset_last_error_message(void);

/**
 * Creates `GF(p^k)`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum RssetStatus rsset_field_new(uint64_t p, uint32_t k, struct RssetField **out);

/**
 * Creates the field with `q` elements.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum RssetStatus rsset_field_with_order(uint64_t q, struct RssetField **out);

/**
 * # Safety
 * `field` must come from this library and not be used afterwards.
 */
void rsset_field_free(struct RssetField *field);

/**
 * Field order, or 0 for a null handle.
 *
 * # Safety
 * `field` must be null or a live handle.
 */
uint64_t rsset_field_order(const struct RssetField *field);

/**
 * # Safety
 * `field` must be a live handle and `out` valid.
 */
enum RssetStatus rsset_field_add(const struct RssetField *field,
                                 uint64_t a,
                                 uint64_t b,
                                 uint64_t *out);

/**
 * # Safety
 * `field` must be a live handle and `out` valid.
 */
enum RssetStatus rsset_field_mul(const struct RssetField *field,
                                 uint64_t a,
                                 uint64_t b,
                                 uint64_t *out);

/**
 * # Safety
 * `field` must be a live handle and `out` valid.
 */
enum RssetStatus rsset_field_inv(const struct RssetField *field, uint64_t a, uint64_t *out);

/**
 * Builds a set from `count` row-major vectors of length `n + 1`.
 *
 * # Safety
 * `coords` must point to `count * (n + 1)` values.
 */
enum RssetStatus rsset_pointset_from_coords(const struct RssetField *field,
                                            size_t n,
                                            const uint64_t *coords,
                                            size_t count,
                                            struct RssetPointSet **out);

/**
 * Parses the JSON interchange format.
 *
 * # Safety
 * `json` must be a nul-terminated string.
 */
enum RssetStatus rsset_pointset_from_json(const char *json, struct RssetPointSet **out);

/**
 * Serializes to the JSON interchange format; negative `r` or `s` are
 * written as null. Release the string with [`rsset_string_free`].
 *
 * # Safety
 * `set` must be a live handle and `out` valid.
 */
enum RssetStatus rsset_pointset_to_json(const struct RssetPointSet *set,
                                        int64_t r,
                                        int64_t s,
                                        char **out);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void rsset_string_free(char *s);

/**
 * # Safety
 * `set` must come from this library and not be used afterwards.
 */
void rsset_pointset_free(struct RssetPointSet *set);

/**
 * Number of points, or 0 for a null handle.
 *
 * # Safety
 * `set` must be null or a live handle.
 */
size_t rsset_pointset_len(const struct RssetPointSet *set);

/**
 * Projective dimension `n`, or 0 for a null handle.
 *
 * # Safety
 * `set` must be null or a live handle.
 */
size_t rsset_pointset_dim(const struct RssetPointSet *set);

/**
 * Field order of the set, or 0 for a null handle.
 *
 * # Safety
 * `set` must be null or a live handle.
 */
uint64_t rsset_pointset_order(const struct RssetPointSet *set);

/**
 * Copies point `index` into `buf`, which must hold `n + 1` values.
 *
 * # Safety
 * `buf` must point to `buf_len` writable values.
 */
enum RssetStatus rsset_pointset_point(const struct RssetPointSet *set,
                                      size_t index,
                                      uint64_t *buf,
                                      size_t buf_len);

/**
 * # Safety
 * `field` must be a live handle and `out` valid.
 */
enum RssetStatus rsset_monomial_curve(const struct RssetField *field,
                                      size_t n,
                                      struct RssetPointSet **out);

/**
 * # Safety
 * `field` must be a live handle and `out` valid.
 */
enum RssetStatus rsset_monomial_curve_affine(const struct RssetField *field,
                                             size_t n,
                                             struct RssetPointSet **out);

/**
 * # Safety
 * `field` must be a live handle and `out` valid.
 */
enum RssetStatus rsset_rational_normal_curve(const struct RssetField *field,
                                             size_t c,
                                             struct RssetPointSet **out);

/**
 * # Safety
 * `field` must be a live handle and `out` valid.
 */
enum RssetStatus rsset_elliptic_ovoid(const struct RssetField *field, struct RssetPointSet **out);

/**
 * The graph curve in PG(6, q0^2).
 *
 * # Safety
 * `out` must be valid.
 */
enum RssetStatus rsset_graph_curve_32(uint64_t q0, struct RssetPointSet **out);

/**
 * # Safety
 * `field` must be a live handle and `out` valid.
 */
enum RssetStatus rsset_gv_construction(const struct RssetField *field,
                                       size_t n,
                                       size_t r,
                                       size_t s,
                                       uint64_t seed,
                                       struct RssetPointSet **out);

/**
 * # Safety
 * `field` must be a live handle and `out` valid.
 */
enum RssetStatus rsset_quadric_42_construction(const struct RssetField *field,
                                               size_t m,
                                               uint64_t seed,
                                               struct RssetPointSet **out);

/**
 * # Safety
 * `field` must be a live handle and `out` valid.
 */
enum RssetStatus rsset_cubic_92_construction(const struct RssetField *field,
                                             uint64_t seed,
                                             struct RssetPointSet **out);

/**
 * Writes whether `set` is an (r, s)-set. `budget = 0` selects the default.
 *
 * # Safety
 * `set` must be a live handle and `out` valid.
 */
enum RssetStatus rsset_is_rs_set(const struct RssetPointSet *set,
                                 size_t r,
                                 size_t s,
                                 uint64_t budget,
                                 bool *out);

/**
 * Writes whether `set` is a proper (r, s)-set.
 *
 * # Safety
 * `set` must be a live handle and `out` valid.
 */
enum RssetStatus rsset_is_proper(const struct RssetPointSet *set,
                                 size_t r,
                                 size_t s,
                                 uint64_t budget,
                                 bool *out);

/**
 * Largest intersection of `set` with an s-space.
 *
 * # Safety
 * `set` must be a live handle and `out` valid.
 */
enum RssetStatus rsset_max_in_s_space(const struct RssetPointSet *set,
                                      size_t s,
                                      uint64_t budget,
                                      size_t *out);

/**
 * Smallest applicable upper bound on an (r, s)-set of PG(n, q).
 *
 * # Safety
 * `out` must be valid.
 */
enum RssetStatus rsset_best_upper_bound(size_t n, uint64_t q, size_t r, size_t s, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RSSET_H */
