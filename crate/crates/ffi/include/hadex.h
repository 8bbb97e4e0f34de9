#ifndef HADEX_H
#define HADEX_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Biregular families selectable by m.
 */
typedef enum HadexFamily {
  /**
   * q = 4m²+4m+3.
   */
  HADEX_FAMILY_Q3 = 0,
  /**
   * q = 2m²+2m+1.
   */
  HADEX_FAMILY_Q1 = 1,
} HadexFamily;

/**
 * Result codes. The numbering follows the command-line exit codes where they overlap.
 */
typedef enum HadexStatus {
  HADEX_STATUS_OK = 0,
  HADEX_STATUS_VERIFICATION_FAILED = 1,
  HADEX_STATUS_INVALID_INPUT = 2,
  HADEX_STATUS_BUDGET_EXCEEDED = 3,
  HADEX_STATUS_NULL_POINTER = 4,
  HADEX_STATUS_INTERNAL = 5,
} HadexStatus;

/**
 * Opaque ±1 matrix.
 */
typedef struct HadexMatrix HadexMatrix;

/**
 * The excess bound for one order.
 */
typedef struct HadexBound {
  int64_t k;
  int64_t t;
  int64_t s;
  int64_t bound;
} HadexBound;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds the signed matrix of a biregular family. A construction that misses
 * its promised row sums reports `VerificationFailed` and leaves `out` untouched.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum HadexStatus hadex_construct(enum HadexFamily family, uint64_t m, struct HadexMatrix **out);

/**
 * Builds the regular matrix of order 4m² from a partition in the text format
 * read by the command-line tool.
 *
 * # Safety
 * `partition` must be a NUL-terminated string and `out` a valid handle slot.
 */
enum HadexStatus hadex_construct_regular(const char *partition, struct HadexMatrix **out);

/**
 * Parses a matrix: the order on the first line, then one row of `+`/`-` per line.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid handle slot.
 */
enum HadexStatus hadex_matrix_parse(const char *text, struct HadexMatrix **out);

/**
 * Releases a matrix. Null is ignored.
 *
 * # Safety
 * `matrix` must come from this library and not be used afterwards.
 */
void hadex_matrix_free(struct HadexMatrix *matrix);

/**
 * Order of the matrix, or 0 for null.
 *
 * # Safety
 * `matrix` must be null or a live handle.
 */
size_t hadex_matrix_order(const struct HadexMatrix *matrix);

/**
 * Entry (i, j) as +1 or -1. Returns 0 for null or out-of-range indices.
 *
 * # Safety
 * `matrix` must be null or a live handle.
 */
int8_t hadex_matrix_get(const struct HadexMatrix *matrix, size_t i, size_t j);

/**
 * Sum of row i.
 *
 * # Safety
 * `matrix` must be a live handle and `out` writable.
 */
enum HadexStatus hadex_matrix_row_sum(const struct HadexMatrix *matrix, size_t i, int64_t *out);

/**
 * `Ok` when the rows are pairwise orthogonal, `VerificationFailed` otherwise.
 *
 * # Safety
 * `matrix` must be a live handle.
 */
enum HadexStatus hadex_matrix_is_hadamard(const struct HadexMatrix *matrix);

/**
 * Sum of all entries.
 *
 * # Safety
 * `matrix` must be a live handle and `out` writable.
 */
enum HadexStatus hadex_matrix_excess(const struct HadexMatrix *matrix, int64_t *out);

/**
 * Text form of the matrix, one row per line.
 *
 * # Safety
 * `matrix` must be a live handle and `out` writable. Free the result with `hadex_string_free`.
 */
enum HadexStatus hadex_matrix_to_text(const struct HadexMatrix *matrix, char **out);

/**
 * Excess report as JSON. Fails with `VerificationFailed` on a non-Hadamard matrix.
 *
 * # Safety
 * `matrix` must be a live handle and `out` writable. Free the result with `hadex_string_free`.
 */
enum HadexStatus hadex_matrix_report_json(const struct HadexMatrix *matrix, char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void hadex_string_free(char *s);

/**
 * Message of the last failure on this thread, or null. Valid until the next call on this thread.
 */
const char *hadex_last_error_message(void);

/**
 * Upper bound on the excess of a Hadamard matrix of order n.
 */
struct HadexBound hadex_excess_bound(uint64_t n);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HADEX_H */
