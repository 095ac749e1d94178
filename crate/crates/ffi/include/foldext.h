#ifndef FOLDEXT_H
#define FOLDEXT_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every call.
 */
typedef enum FoldextStatus {
  FOLDEXT_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  FOLDEXT_STATUS_NULL_ARGUMENT = 1,
  FOLDEXT_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed JSON, wrong version, bad field or duplicate id.
   */
  FOLDEXT_STATUS_PARSE = 3,
  /**
   * The instance parsed but broke a structural law.
   */
  FOLDEXT_STATUS_INVALID_INSTANCE = 4,
  /**
   * A budget or generator parameter was out of range.
   */
  FOLDEXT_STATUS_PRECONDITION = 5,
  /**
   * The certificate does not fit the instance.
   */
  FOLDEXT_STATUS_CERTIFICATE = 6,
  /**
   * The library panicked; this is a bug.
   */
  FOLDEXT_STATUS_INTERNAL = 7,
} FoldextStatus;

typedef enum FoldextOutcome {
  FOLDEXT_OUTCOME_EXTENDABLE = 0,
  FOLDEXT_OUTCOME_NOT_EXTENDABLE = 1,
  /**
   * A budget ran out first.
   */
  FOLDEXT_OUTCOME_UNKNOWN = 2,
} FoldextOutcome;

/**
 * A parsed and validated instance.
 */
typedef struct FoldextInstance FoldextInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failed call on this thread, or null. The
 * pointer stays valid until the next call on the same thread.
 */
const char *foldext_last_error(void);

/**
 * Library version as a static string.
 */
const char *foldext_version(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed before.
 */
void foldext_string_free(char *s);

/**
 * Parses and validates an instance document. On success `*out` receives
 * a handle to release with [`foldext_instance_free`].
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` writable.
 */
enum FoldextStatus foldext_instance_parse(const char *json, struct FoldextInstance **out);

/**
 * # Safety
 * `inst` must be null or a handle from [`foldext_instance_parse`] not yet freed.
 */
void foldext_instance_free(struct FoldextInstance *inst);

/**
 * Checks the structural laws of a document. Returns `Ok` whenever the
 * document parses; `*valid` tells whether it passed, and `*report`
 * receives the JSON report.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `valid` and `report` writable.
 */
enum FoldextStatus foldext_validate(const char *json, bool *valid, char **report);

/**
 * Size of the generated set. `*truncated` is set when `max_graphs` cut it short.
 *
 * # Safety
 * `inst` must be a live handle; `count` and `truncated` writable.
 */
enum FoldextStatus foldext_generated_set_count(const struct FoldextInstance *inst,
                                               size_t max_graphs,
                                               size_t *count,
                                               bool *truncated);

/**
 * Decides extendability. When the outcome is `Extendable` and
 * `certificate` is not null, `*certificate` receives the certificate
 * document; otherwise it is set to null.
 *
 * # Safety
 * `inst` must be a live handle; `outcome` writable; `certificate` null or writable.
 */
enum FoldextStatus foldext_decide(const struct FoldextInstance *inst,
                                  size_t max_graphs,
                                  size_t max_branches_per_graph,
                                  enum FoldextOutcome *outcome,
                                  char **certificate);

/**
 * Verifies a certificate document: every condition and membership of its
 * graph in the generated set. A certificate that does not fit the
 * instance is reported as `*accepted = false`, not as an error.
 *
 * # Safety
 * `inst` must be a live handle, `cert` a NUL-terminated string, `accepted` writable.
 */
enum FoldextStatus foldext_check_certificate(const struct FoldextInstance *inst,
                                             const char *cert,
                                             bool *accepted);

/**
 * Emits the attachment plan for a certificate as JSON.
 *
 * # Safety
 * `inst` must be a live handle, `cert` a NUL-terminated string, `plan` writable.
 */
enum FoldextStatus foldext_plan(const struct FoldextInstance *inst, const char *cert, char **plan);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FOLDEXT_H */
