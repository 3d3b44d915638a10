#ifndef GPDE_H
#define GPDE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GpdeStatus {
  GPDE_STATUS_OK = 0,
  GPDE_STATUS_CHECKS_FAILED = 1,
  GPDE_STATUS_NULL_POINTER = 2,
  GPDE_STATUS_INVALID_UTF8 = 3,
  GPDE_STATUS_PARSE_ERROR = 4,
  GPDE_STATUS_COMPUTE_ERROR = 5,
} GpdeStatus;

/**
 * Opaque model handle.
 */
typedef struct GpdeModel GpdeModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parse `.gpde` source into a new handle.
 *
 * # Safety
 * `src` must be a NUL-terminated string and `out` a valid pointer.
 */
enum GpdeStatus gpde_model_parse(const char *src, struct GpdeModel **out);

/**
 * Load one of the built-in models by name.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum GpdeStatus gpde_model_builtin(const char *name, struct GpdeModel **out);

/**
 * # Safety
 * `m` must come from `gpde_model_parse` or `gpde_model_builtin`, or be null.
 */
void gpde_model_free(struct GpdeModel *m);

/**
 * Projection, nilpotency and presymplectic checks as a JSON report.
 *
 * # Safety
 * `m` must be a live handle and `out` a valid pointer.
 */
enum GpdeStatus gpde_check(const struct GpdeModel *m, char **out);

/**
 * The covariant Hamiltonian and its defining checks as a JSON report.
 *
 * # Safety
 * `m` must be a live handle and `out` a valid pointer.
 */
enum GpdeStatus gpde_hamiltonian(const struct GpdeModel *m, char **out);

/**
 * Pretty-printed `.gpde` source of the model.
 *
 * # Safety
 * `m` must be a live handle.
 */
char *gpde_model_source(const struct GpdeModel *m);

/**
 * Message for the last failure on this thread, or null. Free with
 * `gpde_string_free`.
 */
char *gpde_last_error(void);

/**
 * # Safety
 * `s` must be a string returned by this library, or null.
 */
void gpde_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GPDE_H */
