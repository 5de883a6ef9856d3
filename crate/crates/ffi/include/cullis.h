#ifndef CULLIS_H
#define CULLIS_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum CullisStatus {
  CULLIS_STATUS_OK = 0,
  CULLIS_STATUS_NULL_ARGUMENT,
  CULLIS_STATUS_INVALID_UTF8,
  CULLIS_STATUS_BUFFER_TOO_SMALL,
  CULLIS_STATUS_PANIC,
  CULLIS_STATUS_INVALID_FIELD,
  CULLIS_STATUS_FIELD_MISMATCH,
  CULLIS_STATUS_BOUNDS,
  CULLIS_STATUS_SHAPE,
  CULLIS_STATUS_PARITY,
  CULLIS_STATUS_DIVISION_BY_ZERO,
  CULLIS_STATUS_PARSE,
  CULLIS_STATUS_GROUND_SET,
  CULLIS_STATUS_SIZE_CAP,
  CULLIS_STATUS_UNSUPPORTED,
  CULLIS_STATUS_PRECONDITION,
  CULLIS_STATUS_RANK,
  CULLIS_STATUS_EMPTY_VARIETY,
  CULLIS_STATUS_HYPOTHESIS,
} CullisStatus;

typedef enum CullisAlgorithm {
  CULLIS_ALGORITHM_INJECTION = 0,
  CULLIS_ALGORITHM_MINOR,
  /**
   * Memoized Laplace expansion along the first column.
   */
  CULLIS_ALGORITHM_LAPLACE,
} CullisAlgorithm;

typedef enum CullisMode {
  CULLIS_MODE_EXHAUSTIVE = 0,
  CULLIS_MODE_SAMPLED,
} CullisMode;

/**
 * A matrix over `Q` or a prime field.
 */
typedef struct CullisMatrix CullisMatrix;

/**
 * The outcome of a verification sweep.
 */
typedef struct CullisReport CullisReport;

/**
 * A nonempty affine variety given by its constraint system.
 */
typedef struct CullisVariety CullisVariety;

/**
 * Sweep settings; start from [`cullis_sweep_options_default`].
 */
typedef struct CullisSweepOptions {
  enum CullisMode mode;
  /**
   * Upper bound on determinant evaluations for exhaustive work.
   */
  uint64_t budget;
  /**
   * Random cases in sampled mode.
   */
  uint64_t samples;
  uint64_t seed;
  /**
   * Worker threads; 0 is treated as 1.
   */
  uint32_t jobs;
} CullisSweepOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *cullis_version(void);

/**
 * Copies the message of the last failure on this thread.
 *
 * # Safety
 * `buf` must be valid for `cap` bytes and `len` must be writable.
 */
enum CullisStatus cullis_last_error(char *buf, size_t cap, size_t *len);

/**
 * Parses a matrix in the `rows cols field` text format.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out_matrix` writable.
 */
enum CullisStatus cullis_matrix_parse(const char *text, struct CullisMatrix **out_matrix);

/**
 * # Safety
 * `m` must be null or a handle from [`cullis_matrix_parse`] not yet freed.
 */
void cullis_matrix_free(struct CullisMatrix *m);

/**
 * # Safety
 * `m` must be a live matrix handle; `rows` and `cols` must be writable.
 */
enum CullisStatus cullis_matrix_shape(const struct CullisMatrix *m, size_t *rows, size_t *cols);

/**
 * # Safety
 * `m` must be a live matrix handle and `result` writable.
 */
enum CullisStatus cullis_matrix_rank(const struct CullisMatrix *m, size_t *result);

/**
 * Writes `det_{n,k}` of an `n x k` matrix with `n >= k` as text, e.g. `-3/2` or `4`.
 *
 * # Safety
 * `m` must be a live matrix handle, `buf` valid for `cap` bytes and `len` writable.
 */
enum CullisStatus cullis_matrix_det(const struct CullisMatrix *m,
                                    enum CullisAlgorithm algo,
                                    char *buf,
                                    size_t cap,
                                    size_t *len);

/**
 * Parses a variety in the `space ...` text format.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out_variety` writable.
 */
enum CullisStatus cullis_variety_parse(const char *text, struct CullisVariety **out_variety);

/**
 * # Safety
 * `v` must be null or a handle from [`cullis_variety_parse`] not yet freed.
 */
void cullis_variety_free(struct CullisVariety *v);

/**
 * # Safety
 * `v` must be a live variety handle and `result` writable.
 */
enum CullisStatus cullis_variety_codim(const struct CullisVariety *v, size_t *result);

/**
 * Whether `det_{n,k}` vanishes on every point of a variety of `n x k` matrices.
 *
 * # Safety
 * `v` must be a live variety handle and `result` writable.
 */
enum CullisStatus cullis_variety_annihilates(const struct CullisVariety *v, bool *result);

struct CullisSweepOptions cullis_sweep_options_default(void);

/**
 * Searches varieties of codimension below `k` for one annihilating `det_{n,k}`.
 *
 * # Safety
 * `opts` must be null (defaults) or valid; `out_report` must be writable.
 */
enum CullisStatus cullis_verify_codim_bound(size_t n,
                                            size_t k,
                                            uint32_t q,
                                            const struct CullisSweepOptions *opts,
                                            struct CullisReport **out_report);

/**
 * Checks the alternating-row-sum characterization; needs `n >= k + 2`.
 *
 * # Safety
 * `opts` must be null (defaults) or valid; `out_report` must be writable.
 */
enum CullisStatus cullis_verify_characterization(size_t n,
                                                 size_t k,
                                                 uint32_t q,
                                                 const struct CullisSweepOptions *opts,
                                                 struct CullisReport **out_report);

/**
 * Compares enumeration with the closed-form condition for every row relation.
 *
 * # Safety
 * `opts` must be null (defaults) or valid; `out_report` must be writable.
 */
enum CullisStatus cullis_verify_z_condition(size_t n,
                                            size_t k,
                                            uint32_t q,
                                            const struct CullisSweepOptions *opts,
                                            struct CullisReport **out_report);

/**
 * Runs every registered lemma check.
 *
 * # Safety
 * `out_report` must be writable.
 */
enum CullisStatus cullis_verify_lemmas(uint64_t seed,
                                       uint32_t jobs,
                                       struct CullisReport **out_report);

/**
 * # Safety
 * `r` must be null or a report handle not yet freed.
 */
void cullis_report_free(struct CullisReport *r);

/**
 * False for a null handle.
 *
 * # Safety
 * `r` must be null or a live report handle.
 */
bool cullis_report_passed(const struct CullisReport *r);

/**
 * Cases examined; 0 for a null handle.
 *
 * # Safety
 * `r` must be null or a live report handle.
 */
uint64_t cullis_report_cases(const struct CullisReport *r);

/**
 * Counterexamples found; 0 for a null handle.
 *
 * # Safety
 * `r` must be null or a live report handle.
 */
size_t cullis_report_counterexamples(const struct CullisReport *r);

/**
 * The report as JSON lines, without wall time.
 *
 * # Safety
 * `r` must be a live report handle, `buf` valid for `cap` bytes and `len` writable.
 */
enum CullisStatus cullis_report_records(const struct CullisReport *r,
                                        char *buf,
                                        size_t cap,
                                        size_t *len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CULLIS_H */
