#ifndef SEPLEN_H
#define SEPLEN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SeplenStatus {
  SEPLEN_STATUS_OK = 0,
  SEPLEN_STATUS_NULL_POINTER = 1,
  SEPLEN_STATUS_INVALID_DIMS = 2,
  SEPLEN_STATUS_PARSE = 3,
  SEPLEN_STATUS_RESOURCE_CAP = 4,
  SEPLEN_STATUS_STRUCTURE = 5,
  SEPLEN_STATUS_INVALID_ARGUMENT = 6,
  SEPLEN_STATUS_INTERNAL = 7,
  SEPLEN_STATUS_PANIC = 8,
} SeplenStatus;

// A product-vector point parsed from JSON.
typedef struct SeplenPoint SeplenPoint;

// Outcome of a verification, with its canonical JSON form.
typedef struct SeplenReport SeplenReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Writes `L_c` for the dimension vector `dims[0..n]` to `out`.
//
// # Safety
// `dims` must point to `n` readable values and `out` must be writable.
enum SeplenStatus seplen_lc(const size_t *dims, size_t n, size_t *out);

// Parses a point from JSON (`{"dims": [...], "rows": [...]}`).
//
// # Safety
// `json` must be a NUL-terminated string and `out` writable.
enum SeplenStatus seplen_point_from_json(const char *json, struct SeplenPoint **out);

// # Safety
// `point` must come from [`seplen_point_from_json`] or be null.
void seplen_point_free(struct SeplenPoint *point);

// Exact rank of the real Jacobian at `point`.
//
// # Safety
// `point` must be a live handle and `out` writable.
enum SeplenStatus seplen_jacobian_rank(const struct SeplenPoint *point, size_t *out);

// Checks that `L_c` is critical for `dims[0..n]`. `cap` of 0 means no cap.
// The report passes when the verdict is confirmed.
//
// # Safety
// `dims` must point to `n` readable values and `out` must be writable.
enum SeplenStatus seplen_verify_critical(const size_t *dims,
                                         size_t n,
                                         size_t samples,
                                         uint64_t seed,
                                         size_t cap,
                                         struct SeplenReport **out);

// Runs the `2 x N` determinant checks for integer parameters `a[0..n]`, `b[0..n]`.
//
// # Safety
// `a` and `b` must each point to `n` readable values and `out` must be writable.
enum SeplenStatus seplen_twoxn_verify(const int64_t *a,
                                      const int64_t *b,
                                      size_t n,
                                      struct SeplenReport **out);

// 1 if the report passed, 0 if not or if `report` is null.
//
// # Safety
// `report` must be a live handle or null.
int32_t seplen_report_passed(const struct SeplenReport *report);

// Canonical JSON of the report. Free with [`seplen_string_free`].
//
// # Safety
// `report` must be a live handle or null.
char *seplen_report_json(const struct SeplenReport *report);

// # Safety
// `report` must come from this library or be null.
void seplen_report_free(struct SeplenReport *report);

// # Safety
// `s` must come from [`seplen_report_json`] or be null.
void seplen_string_free(char *s);

// Message for the last failed call on this thread, or null. The pointer
// stays valid until the next call into this library on the same thread.
const char *seplen_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SEPLEN_H */
