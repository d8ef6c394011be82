#ifndef TWISTJF_H
#define TWISTJF_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result codes.
 */
typedef enum TjfStatus {
  TJF_STATUS_OK = 0,
  TJF_STATUS_NULL_POINTER = 1,
  TJF_STATUS_INVALID_UTF8 = 2,
  TJF_STATUS_PARSE = 3,
  TJF_STATUS_GENUS = 4,
  TJF_STATUS_TABLE = 5,
  TJF_STATUS_PRECONDITION = 6,
  TJF_STATUS_LIMIT = 7,
  TJF_STATUS_PANIC = 8,
} TjfStatus;

/*
 Case of an `i_JF` value.
 */
typedef enum TjfIjfCase {
  TJF_IJF_CASE_ZERO = 0,
  TJF_IJF_CASE_ONE = 1,
  TJF_IJF_CASE_EXACT = 2,
  TJF_IJF_CASE_AT_LEAST = 3,
} TjfIjfCase;

/*
 A curve named relative to a table.
 */
typedef struct TjfCurve TjfCurve;

/*
 A twist table for one genus.
 */
typedef struct TjfTable TjfTable;

/*
 An `i_JF` value. `value` is the number itself for `Zero`, `One` and
 `Exact`, and the lower bound for `AtLeast`.
 */
typedef struct TjfIjf {
  enum TjfIjfCase case_;
  uint32_t value;
} TjfIjf;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Library version as a static NUL-terminated string.
 */
const char *tjf_version(void);

/*
 Message of the last failed call on this thread, or NULL. Valid until the
 next call into the library on the same thread.
 */
const char *tjf_last_error(void);

/*
 Opens the built-in table for `genus`.

 # Safety
 `out` must be valid for writes.
 */
enum TjfStatus tjf_table_builtin(uint32_t genus, struct TjfTable **out);

/*
 Loads a table from a file in the twist table text format.

 # Safety
 `path` must be a NUL-terminated string and `out` valid for writes.
 */
enum TjfStatus tjf_table_load(const char *path, struct TjfTable **out);

/*
 # Safety
 `table` must come from this library and not be used afterwards. NULL is ignored.
 */
void tjf_table_free(struct TjfTable *table);

/*
 Genus of a table, or 0 for NULL.

 # Safety
 `table` must be NULL or a live handle.
 */
uint32_t tjf_table_genus(const struct TjfTable *table);

/*
 Parses a curve such as `Sep1 @ [C3 C4^-1]` against `table`.

 # Safety
 `table` must be a live handle, `spec` a NUL-terminated string and `out`
 valid for writes.
 */
enum TjfStatus tjf_curve_parse(const struct TjfTable *table,
                               const char *spec,
                               struct TjfCurve **out);

/*
 # Safety
 `curve` must come from this library and not be used afterwards. NULL is ignored.
 */
void tjf_curve_free(struct TjfCurve *curve);

/*
 Writes `i_JF(c1, c2)` computed with Magnus degree cap `cap`.

 # Safety
 All handles must be live and `out` valid for writes.
 */
enum TjfStatus tjf_ijf(const struct TjfTable *table,
                       const struct TjfCurve *c1,
                       const struct TjfCurve *c2,
                       uint32_t cap,
                       struct TjfIjf *out);

/*
 Full pair report as a JSON document.

 # Safety
 All handles must be live and `out` valid for writes.
 */
enum TjfStatus tjf_pair_json(const struct TjfTable *table,
                             const struct TjfCurve *c1,
                             const struct TjfCurve *c2,
                             uint32_t cap,
                             char **out);

/*
 Checks the table against the mapping class group relations. Writes 1 to
 `passed` if all hold, and the report as JSON to `json` unless it is NULL.

 # Safety
 `table` must be live, `passed` valid for writes, `json` NULL or valid for writes.
 */
enum TjfStatus tjf_validate(const struct TjfTable *table, int32_t *passed, char **json);

/*
 Releases a string returned by this library. NULL is ignored.

 # Safety
 `s` must come from this library and not be used afterwards.
 */
void tjf_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TWISTJF_H */
