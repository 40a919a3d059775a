#ifndef DECALAGE_H
#define DECALAGE_H

#pragma once

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DecalageCoefficients {
  DECALAGE_COEFFICIENTS_INT = 0,
  DECALAGE_COEFFICIENTS_RAT = 1,
} DecalageCoefficients;

typedef enum DecalageStatus {
  DECALAGE_STATUS_OK = 0,
  DECALAGE_STATUS_NULL_ARGUMENT = 1,
  DECALAGE_STATUS_INVALID_UTF8 = 2,
  DECALAGE_STATUS_PARSE = 3,
  DECALAGE_STATUS_INVALID_INPUT = 4,
  DECALAGE_STATUS_PRECONDITION = 5,
  DECALAGE_STATUS_IO = 6,
  DECALAGE_STATUS_PANIC = 7,
} DecalageStatus;

/**
 * A complex with its filtrations, and the flag data when built from a
 * simplicial complex.
 */
typedef struct DecalageWorkspace DecalageWorkspace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static string.
 */
const char *decalage_version(void);

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call into the library on the same thread.
 */
const char *decalage_last_error(void);

/**
 * # Safety
 * `s` must come from this library, or be null.
 */
void decalage_string_free(char *s);

/**
 * Parses a filtered document (or a bare complex) from JSON.
 *
 * # Safety
 * `json_text` must be a NUL-terminated string; `out` must be writable.
 */
enum DecalageStatus decalage_workspace_from_json(const char *json_text,
                                                 struct DecalageWorkspace **out);

/**
 * Builds the flag filtration of a simplicial complex given as text.
 * `flag_json` and `sheaf_json` may be null for the trivial flag and the
 * constant sheaf.
 *
 * # Safety
 * Non-null strings must be NUL-terminated; `out` must be writable.
 */
enum DecalageStatus decalage_workspace_from_simplicial(const char *complex_text,
                                                       const char *flag_json,
                                                       const char *sheaf_json,
                                                       struct DecalageWorkspace **out);

/**
 * # Safety
 * `ws` must come from this library, or be null; it is invalid afterwards.
 */
void decalage_workspace_free(struct DecalageWorkspace *ws);

/**
 * Number of named filtrations in the workspace.
 *
 * # Safety
 * `ws` must be a live handle; `count` must be writable.
 */
enum DecalageStatus decalage_workspace_filtration_count(const struct DecalageWorkspace *ws,
                                                        size_t *count);

/**
 * `H^degree` as a free rank and the number of torsion summands.
 *
 * # Safety
 * `ws` must be a live handle; the outputs must be writable.
 */
enum DecalageStatus decalage_cohomology(const struct DecalageWorkspace *ws,
                                        int32_t degree,
                                        enum DecalageCoefficients coefficients,
                                        size_t *free_rank,
                                        size_t *torsion_count);

/**
 * Runs a named check (`sta`, `pdec`, `lmlu`, `cellular`, `dec-reindex`,
 * `e1-triples`, `ker-formula`, `validate`, `cohomology`) with the default
 * roles `P` and `F`. The JSON report goes to `report_json`, which may be null.
 *
 * # Safety
 * `ws` must be a live handle; `check` NUL-terminated; `pass` writable.
 */
enum DecalageStatus decalage_check(const struct DecalageWorkspace *ws,
                                   const char *check,
                                   enum DecalageCoefficients coefficients,
                                   bool *pass,
                                   char **report_json);

/**
 * Runs a scenario bundle (a directory or a `scenario.json` path).
 *
 * # Safety
 * `path` NUL-terminated; `pass` writable; `report_json` writable or null.
 */
enum DecalageStatus decalage_run_scenario(const char *path,
                                          enum DecalageCoefficients coefficients,
                                          bool *pass,
                                          char **report_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DECALAGE_H */
