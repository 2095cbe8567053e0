/*
 C interface to cyclohom.

 Handles (CyclohomPoly, CyclohomReport) are opaque and released with the
 matching *_free function. Fallible calls return a CyclohomStatus; after a
 failure cyclohom_last_error copies a message for the calling thread.

 String results are copied into a caller buffer of `capacity` bytes. The
 required size including the terminating NUL is stored in *needed (when
 non-null), and CYCLOHOM_STATUS_BUFFER_TOO_SMALL is returned when the
 buffer is null or short.
 */

#ifndef CYCLOHOM_H
#define CYCLOHOM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CyclohomStatus {
  CYCLOHOM_STATUS_OK = 0,
  CYCLOHOM_STATUS_NULL_POINTER = 1,
  CYCLOHOM_STATUS_INVALID_ARGUMENT = 2,
  CYCLOHOM_STATUS_NOT_SQUAREFREE = 3,
  CYCLOHOM_STATUS_PARSE_ERROR = 4,
  CYCLOHOM_STATUS_OVERFLOW = 5,
  CYCLOHOM_STATUS_BUFFER_TOO_SMALL = 6,
  CYCLOHOM_STATUS_CHECK_FAILED = 7,
  CYCLOHOM_STATUS_INTERNAL = 8,
} CyclohomStatus;

/*
 A cyclotomic polynomial.
 */
typedef struct CyclohomPoly CyclohomPoly;

/*
 A list of verification reports.
 */
typedef struct CyclohomReport CyclohomReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Copies the calling thread's last error message.

 # Safety
 `buf` must point to `capacity` writable bytes or be null; `needed` must be
 null or writable.
 */
enum CyclohomStatus cyclohom_last_error(char *buf, size_t capacity, size_t *needed);

/*
 Computes the `n`-th cyclotomic polynomial.

 # Safety
 `out` must be a valid pointer; the handle written there is owned by the
 caller.
 */
enum CyclohomStatus cyclohom_cyclotomic(uint64_t n, struct CyclohomPoly **out);

/*
 Degree of the polynomial, or -1 for a null handle.

 # Safety
 `poly` must be null or a live handle.
 */
int64_t cyclohom_poly_degree(const struct CyclohomPoly *poly);

/*
 Coefficient of `x^j` as a 64-bit integer.

 # Safety
 `poly` must be a live handle and `out` writable.
 */
enum CyclohomStatus cyclohom_poly_coefficient(const struct CyclohomPoly *poly,
                                              size_t j,
                                              int64_t *out);

/*
 Space-separated decimal coefficients, constant term first.

 # Safety
 See the string buffer convention at the top of the header.
 */
enum CyclohomStatus cyclohom_poly_to_string(const struct CyclohomPoly *poly,
                                            char *buf,
                                            size_t capacity,
                                            size_t *needed);

/*
 # Safety
 `poly` must be null or a handle not yet freed.
 */
void cyclohom_poly_free(struct CyclohomPoly *poly);

/*
 Runs the comma-separated `checks` for `n`. A failed check still yields a
 report; `CYCLOHOM_STATUS_CHECK_FAILED` signals it.

 # Safety
 `checks` must be a NUL-terminated string and `out` writable.
 */
enum CyclohomStatus cyclohom_verify(uint64_t n,
                                    const char *checks,
                                    uint64_t seed,
                                    struct CyclohomReport **out);

/*
 1 when every check in the report passed, 0 otherwise or for null.

 # Safety
 `report` must be null or a live handle.
 */
int32_t cyclohom_report_passed(const struct CyclohomReport *report);

/*
 The report as JSON.

 # Safety
 See the string buffer convention at the top of the header.
 */
enum CyclohomStatus cyclohom_report_json(const struct CyclohomReport *report,
                                         char *buf,
                                         size_t capacity,
                                         size_t *needed);

/*
 # Safety
 `report` must be null or a handle not yet freed.
 */
void cyclohom_report_free(struct CyclohomReport *report);

/*
 Smith normal form diagonal of a matrix in "rows cols nnz" / "i j value"
 triplet text, written space-separated.

 # Safety
 `matrix` must be NUL-terminated; see the string buffer convention at the top of the header.
 */
enum CyclohomStatus cyclohom_snf(const char *matrix, char *buf, size_t capacity, size_t *needed);

/*
 Reduced homology in degree `dim` of a complex given as JSON
 (`{"parts": [...], "facets": [[...], ...], "full_skeleton": false}`),
 written as e.g. `Z`, `Z/2` or `0`.

 # Safety
 `complex_json` must be NUL-terminated; see the string buffer convention at the top
 of the header.
 */
enum CyclohomStatus cyclohom_homology(const char *complex_json,
                                      int64_t dim,
                                      char *buf,
                                      size_t capacity,
                                      size_t *needed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CYCLOHOM_H */
