#ifndef ORBIFUNCTOR_H
#define ORBIFUNCTOR_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Zero is success.
 */
typedef enum {
  OF_STATUS_OK = 0,
  OF_STATUS_NULL_POINTER = 1,
  OF_STATUS_INVALID_UTF8 = 2,
  /**
   * The manifest or a command argument was rejected.
   */
  OF_STATUS_INVALID_INPUT = 3,
  /**
   * The engine refused the data (bad dimensions, bounds, truncation).
   */
  OF_STATUS_COMPUTE_ERROR = 4,
  OF_STATUS_OUT_OF_RANGE = 5,
  OF_STATUS_PANIC = 6,
} OfStatus;

typedef struct OfGroup OfGroup;

typedef struct OfManifest OfManifest;

typedef struct OfReport OfReport;

/**
 * Optional flags for [`of_run`]. A field is used only when its `has_` flag
 * is set. `mode` is 1 for strict and 2 for almost.
 */
typedef struct {
  bool has_degree;
  int64_t degree;
  bool has_truncation;
  size_t truncation;
  bool has_mode;
  uint32_t mode;
  bool has_prime;
  uint32_t prime;
} OfOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next call into this library from the same thread.
 */
const char *of_last_error(void);

/**
 * Library version as a static string.
 */
const char *of_version(void);

/**
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void of_string_free(char *s);

/**
 * Parses and resolves a manifest.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` a writable pointer.
 */
OfStatus of_manifest_parse(const char *text, OfManifest **out);

/**
 * # Safety
 * `m` must come from [`of_manifest_parse`] and not have been freed.
 */
void of_manifest_free(OfManifest *m);

/**
 * Runs a command by its CLI name. `manifest` and `opts` may be null.
 * A report is produced whether or not its verdicts pass.
 *
 * # Safety
 * Pointers must be null or valid; `command` must be nul-terminated.
 */
OfStatus of_run(const char *command,
                const OfManifest *manifest,
                const OfOptions *opts,
                OfReport **out);

/**
 * # Safety
 * `r` must come from [`of_run`] and not have been freed.
 */
void of_report_free(OfReport *r);

/**
 * 1 when every verdict passes, 0 when one fails, -1 on a null handle.
 *
 * # Safety
 * `r` must be null or a live report.
 */
int32_t of_report_passes(const OfReport *r);

/**
 * # Safety
 * `r` must be null or a live report.
 */
size_t of_report_verdict_count(const OfReport *r);

/**
 * The report as JSON, identical to the CLI's `--report` output.
 *
 * # Safety
 * `r` must be a live report and `out` writable.
 */
OfStatus of_report_json(const OfReport *r, char **out);

/**
 * The report as the CLI's plain-text table.
 *
 * # Safety
 * `r` must be a live report and `out` writable.
 */
OfStatus of_report_table(const OfReport *r, char **out);

/**
 * The cokernel of a `rows x cols` integer matrix given row-major.
 *
 * # Safety
 * `entries` must point to `rows * cols` readable values (it may be null
 * when the product is zero).
 */
OfStatus of_group_cokernel(size_t rows, size_t cols, const int64_t *entries, OfGroup **out);

/**
 * `Hom(a, b)` when `tensor` is false, `a ⊗ b` when it is true.
 *
 * # Safety
 * `a` and `b` must be live groups and `out` writable.
 */
OfStatus of_group_combine(const OfGroup *a, const OfGroup *b, bool tensor, OfGroup **out);

/**
 * # Safety
 * `g` must be null or a live group.
 */
size_t of_group_rank(const OfGroup *g);

/**
 * Number of invariant factors.
 *
 * # Safety
 * `g` must be null or a live group.
 */
size_t of_group_torsion_len(const OfGroup *g);

/**
 * The `i`-th invariant factor, when it fits in 64 bits.
 *
 * # Safety
 * `g` must be a live group and `out` writable.
 */
OfStatus of_group_torsion_at(const OfGroup *g, size_t i, int64_t *out);

/**
 * Canonical description such as `Z^2 ⊕ Z/6`.
 *
 * # Safety
 * `g` must be a live group and `out` writable.
 */
OfStatus of_group_describe(const OfGroup *g, char **out);

/**
 * # Safety
 * `g` must come from this library and not have been freed.
 */
void of_group_free(OfGroup *g);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* ORBIFUNCTOR_H */
