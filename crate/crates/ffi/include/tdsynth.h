#ifndef TDSYNTH_H
#define TDSYNTH_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Passed as `state_cap` to use the library default.
 */
#define TDS_DEFAULT_STATE_CAP 0

typedef enum TdsStatus {
  TDS_STATUS_OK = 0,
  TDS_STATUS_NULL_ARGUMENT = 1,
  TDS_STATUS_INVALID_UTF8 = 2,
  TDS_STATUS_JSON = 3,
  TDS_STATUS_INVALID_SYSTEM = 4,
  TDS_STATUS_SYNTAX = 5,
  TDS_STATUS_UNKNOWN_NAME = 6,
  TDS_STATUS_STATE_CAP_EXCEEDED = 7,
  TDS_STATUS_INVALID_REQUEST = 8,
  TDS_STATUS_MALFORMED_FRAGMENT = 9,
  TDS_STATUS_BUDGET_EXCEEDED = 10,
  TDS_STATUS_INTERNAL = 11,
} TdsStatus;

typedef enum TdsMode {
  TDS_MODE_EXACT = 0,
  TDS_MODE_PAPER = 1,
} TdsMode;

/**
 * Parsed formula.
 */
typedef struct TdsFormula TdsFormula;

/**
 * Outcome of a synthesis run.
 */
typedef struct TdsResult TdsResult;

/**
 * Untimed system description.
 */
typedef struct TdsSystem TdsSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next call into the library from the same thread.
 */
const char *tds_last_error_message(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void tds_string_free(char *s);

/**
 * Parses a system from JSON text.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum TdsStatus tds_system_from_json(const char *json, struct TdsSystem **out);

/**
 * # Safety
 * `sys` must be null or a handle from `tds_system_from_json`.
 */
void tds_system_free(struct TdsSystem *sys);

/**
 * Number of reachable timed states.
 *
 * # Safety
 * `sys` must be a live handle; `out` must be writable.
 */
enum TdsStatus tds_tdes_state_count(const struct TdsSystem *sys, size_t state_cap, size_t *out);

/**
 * # Safety
 * `text` must be a nul-terminated string; `out` must be writable.
 */
enum TdsStatus tds_formula_parse(const char *text, struct TdsFormula **out);

/**
 * # Safety
 * `f` must be null or a handle from `tds_formula_parse`.
 */
void tds_formula_free(struct TdsFormula *f);

/**
 * Canonical text of the formula; free with `tds_string_free`. Null if `f` is null.
 *
 * # Safety
 * `f` must be null or a live handle.
 */
char *tds_formula_to_string(const struct TdsFormula *f);

/**
 * Searches horizons `hmin..=hmax` for a fragment satisfying `f`.
 *
 * # Safety
 * `sys` and `f` must be live handles; `out` must be writable.
 */
enum TdsStatus tds_synthesize(const struct TdsSystem *sys,
                              const struct TdsFormula *f,
                              size_t hmin,
                              size_t hmax,
                              enum TdsMode mode,
                              size_t state_cap,
                              struct TdsResult **out);

/**
 * # Safety
 * `r` must be null or a handle from `tds_synthesize`.
 */
void tds_result_free(struct TdsResult *r);

/**
 * Whether a fragment was found. False for a null handle.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
bool tds_result_found(const struct TdsResult *r);

/**
 * Horizon of the fragment, or 0 when none was found.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
size_t tds_result_horizon(const struct TdsResult *r);

/**
 * Fragment JSON, or null when none was found. Owned by the result.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
const char *tds_result_fragment_json(const struct TdsResult *r);

/**
 * Full result document (outcome, fragment, statistics, attempts). Owned by the result.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
const char *tds_result_json(const struct TdsResult *r);

/**
 * Evaluates `f` at position `at` of a fragment given as JSON.
 *
 * # Safety
 * `sys` and `f` must be live handles, `fragment_json` nul-terminated, `out` writable.
 */
enum TdsStatus tds_check_fragment(const struct TdsSystem *sys,
                                  const struct TdsFormula *f,
                                  const char *fragment_json,
                                  size_t at,
                                  size_t state_cap,
                                  bool *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TDSYNTH_H */
