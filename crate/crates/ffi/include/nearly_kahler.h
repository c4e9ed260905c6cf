/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef NEARLY_KAHLER_H
#define NEARLY_KAHLER_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum NkStatus {
  NK_STATUS_OK = 0,
  // The computation ran and a mathematical check failed.
  NK_STATUS_MATH_FAIL = 1,
  // Malformed input document, unknown name or invalid argument.
  NK_STATUS_INVALID_INPUT = 2,
  NK_STATUS_NULL_POINTER = 3,
  NK_STATUS_UTF8 = 4,
  // A panic was caught at the boundary.
  NK_STATUS_INTERNAL = 5,
} NkStatus;

// Verification report.
typedef struct NkReport NkReport;

// Validated space document.
typedef struct NkSpace NkSpace;

typedef struct NkOptions {
  double tolerance;
  // Nonzero for exact arithmetic where possible.
  int32_t exact;
  uint64_t seed;
  int64_t grid;
  size_t samples;
  int64_t sweep_denominator;
  int64_t sweep_max_numerator;
} NkOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library defaults: tolerance 1e-10, exact arithmetic, seed 0, grid 4,
// 100 samples, sweep `k/4` with `|k| ≤ 20`.
struct NkOptions nk_options_default(void);

// Message of the last failed call on this thread, or NULL. The pointer is
// valid until the next failing call on the same thread.
const char *nk_last_error(void);

// Library version as a static string.
const char *nk_version(void);

// Parses and validates a space document.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum NkStatus nk_space_from_json(const char *json, struct NkSpace **out);

// Document of a catalog model: `s3xs3`, `s3xs3-112`, `flag`, `cp3`,
// `ledger-obata`.
//
// # Safety
// `model` must be a NUL-terminated string and `out` a valid pointer.
enum NkStatus nk_space_emit(const char *model, struct NkSpace **out);

// Dimension of the Lie algebra.
//
// # Safety
// `space` must come from this library and `out` be a valid pointer.
enum NkStatus nk_space_dimension(const struct NkSpace *space, size_t *out);

// Serializes the document; free the result with `nk_string_free`.
//
// # Safety
// `space` must come from this library and `out` be a valid pointer.
enum NkStatus nk_space_to_json(const struct NkSpace *space, char **out);

// # Safety
// `space` must come from this library (or be NULL) and not be used after.
void nk_space_free(struct NkSpace *space);

// SU(3)-structure and nearly Kähler system on the document's `omega`
// (and `psi`), with the cone when `cone` is nonzero. A report is produced
// whether or not the checks pass; inspect it with `nk_report_passed`.
//
// # Safety
// `space` must come from this library, `options` be NULL or valid, and
// `out` a valid pointer.
enum NkStatus nk_check(const struct NkSpace *space,
                       const struct NkOptions *options,
                       int32_t cone,
                       struct NkReport **out);

// Catalog verification: `s3xs3`, `flag`, `cp3`, `s6`, `ledger-obata`,
// `cone`.
//
// # Safety
// `name` must be a NUL-terminated string, `options` NULL or valid, and
// `out` a valid pointer.
enum NkStatus nk_verify(const char *name, const struct NkOptions *options, struct NkReport **out);

// Dimension table of isotropy and transitive algebras.
//
// # Safety
// `out` must be a valid pointer.
enum NkStatus nk_table(struct NkReport **out);

// Nonzero when no check failed.
//
// # Safety
// `report` must come from this library and `out` be a valid pointer.
enum NkStatus nk_report_passed(const struct NkReport *report, int32_t *out);

// Number of individual checks in the report.
//
// # Safety
// `report` must come from this library and `out` be a valid pointer.
enum NkStatus nk_report_check_count(const struct NkReport *report, size_t *out);

// JSON form of the report; free the result with `nk_string_free`.
//
// # Safety
// `report` must come from this library and `out` be a valid pointer.
enum NkStatus nk_report_json(const struct NkReport *report, char **out);

// Plain-text summary; free the result with `nk_string_free`.
//
// # Safety
// `report` must come from this library and `out` be a valid pointer.
enum NkStatus nk_report_text(const struct NkReport *report, char **out);

// # Safety
// `report` must come from this library (or be NULL) and not be used after.
void nk_report_free(struct NkReport *report);

// # Safety
// `s` must be a string returned by this library (or NULL).
void nk_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NEARLY_KAHLER_H */
