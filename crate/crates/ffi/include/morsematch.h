#ifndef MORSEMATCH_H
#define MORSEMATCH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of a solve.
 */
typedef enum MmSolveStatus {
  MM_SOLVE_STATUS_OPTIMAL = 0,
  MM_SOLVE_STATUS_FEASIBLE = 1,
  MM_SOLVE_STATUS_TIME_LIMIT = 2,
  MM_SOLVE_STATUS_NODE_LIMIT = 3,
} MmSolveStatus;

/**
 * Error codes.
 */
typedef enum MmStatus {
  MM_STATUS_OK = 0,
  MM_STATUS_NULL_POINTER = 1,
  MM_STATUS_INVALID_UTF8 = 2,
  MM_STATUS_PARSE = 3,
  MM_STATUS_FIELD = 4,
  MM_STATUS_DISCONNECTED = 5,
  MM_STATUS_SOLVER = 6,
  MM_STATUS_BUFFER_TOO_SMALL = 7,
  MM_STATUS_INVALID_ARGUMENT = 8,
  MM_STATUS_PANIC = 9,
} MmStatus;

typedef struct MmComplex MmComplex;

typedef struct MmResult MmResult;

/**
 * Solver settings; obtain defaults from [`mm_solve_options_default`].
 * Zero limits mean "no limit".
 */
typedef struct MmSolveOptions {
  double time_limit_seconds;
  uint64_t node_limit;
  uint32_t separation_rounds;
  uint32_t heuristic_frequency;
  uint32_t max_cuts;
  /**
   * 0: most fractional, 1: pseudocost.
   */
  uint32_t branching;
  bool gomory;
  bool separate;
  bool free_face_cuts;
  bool split_components;
} MmSolveOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty if none. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *mm_last_error_message(void);

/**
 * Parses the facet-list text format.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` a valid pointer.
 */
enum MmStatus mm_complex_from_text(const char *text, struct MmComplex **out);

/**
 * Builds a complex from `count` facets stored back to back in `vertices`,
 * facet `k` having `lengths[k]` vertices.
 *
 * # Safety
 * `vertices` must hold `sum(lengths)` entries, `lengths` must hold `count`
 * entries, and `out` must be a valid pointer.
 */
enum MmStatus mm_complex_from_facets(const uint32_t *vertices,
                                     const size_t *lengths,
                                     size_t count,
                                     struct MmComplex **out);

/**
 * # Safety
 * `complex` must come from this library and not be freed twice.
 */
void mm_complex_free(struct MmComplex *complex);

/**
 * Number of faces; 0 for a null handle.
 *
 * # Safety
 * `complex` must be null or a live handle.
 */
size_t mm_complex_num_faces(const struct MmComplex *complex);

/**
 * Number of Hasse diagram arcs; 0 for a null handle.
 *
 * # Safety
 * `complex` must be null or a live handle.
 */
size_t mm_complex_num_arcs(const struct MmComplex *complex);

/**
 * Dimension; 0 for a null handle.
 *
 * # Safety
 * `complex` must be null or a live handle.
 */
size_t mm_complex_dim(const struct MmComplex *complex);

/**
 * Face counts `f_0..f_d`.
 *
 * # Safety
 * `out` must have room for `len` values; `written` may be null.
 */
enum MmStatus mm_complex_f_vector(const struct MmComplex *complex,
                                  size_t *out,
                                  size_t len,
                                  size_t *written);

/**
 * Betti numbers over `field` ("q", "gf2", "gf3", ...).
 *
 * # Safety
 * `field` must be a nul-terminated string, `out` must have room for `len`
 * values; `written` may be null.
 */
enum MmStatus mm_betti(const struct MmComplex *complex,
                       const char *field,
                       size_t *out,
                       size_t len,
                       size_t *written);

struct MmSolveOptions mm_solve_options_default(void);

/**
 * Solves for a maximum Morse matching. `options` may be null for defaults.
 *
 * # Safety
 * `complex` must be a live handle, `options` null or valid, `out` valid.
 */
enum MmStatus mm_solve(const struct MmComplex *complex,
                       const struct MmSolveOptions *options,
                       struct MmResult **out);

/**
 * # Safety
 * `result` must come from [`mm_solve`] and not be freed twice.
 */
void mm_result_free(struct MmResult *result);

/**
 * # Safety
 * `result` must be a live handle.
 */
enum MmSolveStatus mm_result_status(const struct MmResult *result);

/**
 * Total number of critical faces `c`.
 *
 * # Safety
 * `result` must be null or a live handle.
 */
size_t mm_result_critical(const struct MmResult *result);

/**
 * Critical faces per dimension.
 *
 * # Safety
 * `out` must have room for `len` values; `written` may be null.
 */
enum MmStatus mm_result_critical_counts(const struct MmResult *result,
                                        size_t *out,
                                        size_t len,
                                        size_t *written);

/**
 * Number of matched pairs.
 *
 * # Safety
 * `result` must be null or a live handle.
 */
size_t mm_result_matching_size(const struct MmResult *result);

/**
 * Branch-and-bound nodes processed.
 *
 * # Safety
 * `result` must be null or a live handle.
 */
size_t mm_result_nodes(const struct MmResult *result);

/**
 * Upper bound on the matching size; NaN for a null handle.
 *
 * # Safety
 * `result` must be null or a live handle.
 */
double mm_result_dual_bound(const struct MmResult *result);

/**
 * The result as a JSON document; release with [`mm_string_free`]. Null on
 * failure.
 *
 * # Safety
 * `result` must be a live handle.
 */
char *mm_result_to_json(const struct MmResult *result);

/**
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void mm_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MORSEMATCH_H */
