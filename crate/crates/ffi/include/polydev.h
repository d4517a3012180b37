#ifndef POLYDEV_H
#define POLYDEV_H

#pragma once

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PolydevStatus {
  POLYDEV_STATUS_OK = 0,
  POLYDEV_STATUS_NULL_POINTER = 1,
  POLYDEV_STATUS_INVALID_UTF8 = 2,
  POLYDEV_STATUS_PARSE = 3,
  POLYDEV_STATUS_INVALID_DEVELOPMENT = 4,
  POLYDEV_STATUS_MAP = 5,
  POLYDEV_STATUS_INVALID_ARGUMENT = 6,
  POLYDEV_STATUS_INTERNAL = 7,
} PolydevStatus;

typedef enum PolydevVerdictKind {
  POLYDEV_VERDICT_KIND_NOT_AFFINE_EQUIVALENT = 0,
  POLYDEV_VERDICT_KIND_AFFINE_EQUIVALENT_CONDITIONAL = 1,
  POLYDEV_VERDICT_KIND_INCONCLUSIVE = 2,
} PolydevVerdictKind;

/**
 * A parsed development.
 */
typedef struct PolydevDevelopment PolydevDevelopment;

/**
 * Result of a recognition run.
 */
typedef struct PolydevVerdict PolydevVerdict;

/**
 * Solver settings; start from [`polydev_config_default`].
 */
typedef struct PolydevConfig {
  uint32_t max_depth;
  double eps_res;
  double eps_width;
  double alpha_bound;
  uint64_t max_boxes;
  /**
   * Also run the patches of the second development.
   */
  bool symmetric;
  /**
   * Worker threads; 0 uses the global pool.
   */
  uint32_t jobs;
} PolydevConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after success.
 * Valid until the next polydev call on the same thread.
 */
const char *polydev_last_error(void);

struct PolydevConfig polydev_config_default(void);

/**
 * Parses a development from JSON text into `*out`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum PolydevStatus polydev_development_parse(const char *json, struct PolydevDevelopment **out);

/**
 * # Safety
 * `dev` must come from [`polydev_development_parse`] or be null.
 */
void polydev_development_free(struct PolydevDevelopment *dev);

/**
 * # Safety
 * `dev` must be a live handle.
 */
size_t polydev_development_num_vertices(const struct PolydevDevelopment *dev);

/**
 * # Safety
 * `dev` must be a live handle.
 */
size_t polydev_development_num_faces(const struct PolydevDevelopment *dev);

/**
 * Validation report as JSON in `*report`; `*valid` tells whether it is empty.
 *
 * # Safety
 * `dev` must be a live handle; `valid` and `report` valid pointers.
 */
enum PolydevStatus polydev_development_validate(const struct PolydevDevelopment *dev,
                                                double eps_len,
                                                bool *valid,
                                                char **report);

/**
 * Runs the recognizer. `map_json` may be null to pair equal vertex names;
 * `cfg` may be null for defaults.
 *
 * # Safety
 * Handles must be live; `map_json` null or NUL-terminated; `out` valid.
 */
enum PolydevStatus polydev_recognize(const struct PolydevDevelopment *a,
                                     const struct PolydevDevelopment *b,
                                     const char *map_json,
                                     const struct PolydevConfig *cfg,
                                     struct PolydevVerdict **out);

/**
 * # Safety
 * `v` must be a live handle.
 */
enum PolydevVerdictKind polydev_verdict_kind(const struct PolydevVerdict *v);

/**
 * Evidence document as JSON in `*out`.
 *
 * # Safety
 * `v` must be a live handle and `out` valid.
 */
enum PolydevStatus polydev_verdict_json(const struct PolydevVerdict *v, bool timings, char **out);

/**
 * # Safety
 * `v` must come from [`polydev_recognize`] or be null.
 */
void polydev_verdict_free(struct PolydevVerdict *v);

/**
 * # Safety
 * `s` must come from this library or be null.
 */
void polydev_string_free(char *s);

/**
 * Cayley–Menger determinant of `k + 1` points from their squared distances,
 * a row-major `(k + 1) × (k + 1)` matrix.
 *
 * # Safety
 * `d2` must point to `(k + 1)²` doubles and `out` be valid.
 */
enum PolydevStatus polydev_cayley_menger_det(size_t k, const double *d2, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POLYDEV_H */
