#ifndef MORAVA_H
#define MORAVA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes.
 */
typedef enum MoravaStatus {
  MORAVA_STATUS_OK = 0,
  MORAVA_STATUS_NULL_POINTER = 1,
  MORAVA_STATUS_INVALID_ARGUMENT = 2,
  MORAVA_STATUS_PARSE = 3,
  /**
   * A mathematical precondition failed (inhomogeneous input, relation not
   * preserved, mismatched contexts, ...).
   */
  MORAVA_STATUS_MATH = 4,
  MORAVA_STATUS_IO = 5,
  MORAVA_STATUS_PANIC = 6,
} MoravaStatus;

typedef struct MoravaAlgebra MoravaAlgebra;

typedef struct MoravaFgl MoravaFgl;

typedef struct MoravaHopf MoravaHopf;

typedef struct MoravaSeries MoravaSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread ("" after a success).
 * Valid until the next call into the library on the same thread.
 */
const char *morava_last_error(void);

/**
 * # Safety
 * `s` must come from this library, or be null.
 */
void morava_string_free(char *s);

/**
 * Parse a presentation (`prime 3\nheight 2\ngen e deg -4\nrel e^2 -> 0\n`).
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum MoravaStatus morava_algebra_parse(const char *text, struct MoravaAlgebra **out);

/**
 * The coefficient field `K(n)_*` itself.
 *
 * # Safety
 * `out` must be writable.
 */
enum MoravaStatus morava_algebra_kn(uint32_t p, uint32_t n, struct MoravaAlgebra **out);

/**
 * Render an element given in the polynomial grammar in normal form.
 *
 * # Safety
 * `a` must be a live handle; `text` NUL-terminated; `out` writable.
 */
enum MoravaStatus morava_algebra_normalize(const struct MoravaAlgebra *a,
                                           const char *text,
                                           char **out);

/**
 * # Safety
 * `a` must come from this library, or be null; it is invalid afterwards.
 */
void morava_algebra_free(struct MoravaAlgebra *a);

/**
 * The Honda law over `K(n)_*` modulo `(x, y)^order`.
 *
 * # Safety
 * `out` must be writable.
 */
enum MoravaStatus morava_honda(uint32_t p, uint32_t n, uint32_t order, struct MoravaFgl **out);

/**
 * `F(x, y)` as text.
 *
 * # Safety
 * `f` must be a live handle; `out` writable.
 */
enum MoravaStatus morava_fgl_render(const struct MoravaFgl *f, char **out);

/**
 * Run the law's checks (unit, commutativity, associativity, p-series, ...).
 *
 * # Safety
 * `f` must be a live handle; `passed`, `total` writable.
 */
enum MoravaStatus morava_fgl_verify(const struct MoravaFgl *f, uint32_t *passed, uint32_t *total);

/**
 * # Safety
 * `f` must come from this library, or be null.
 */
void morava_fgl_free(struct MoravaFgl *f);

/**
 * Parse a series in the comma-separated variables `vars` (suffix `:odd`
 * marks an odd variable) over `a`, truncated modulo total degree `order`.
 *
 * # Safety
 * `a` must be a live handle; strings NUL-terminated; `out` writable.
 */
enum MoravaStatus morava_series_parse(const struct MoravaAlgebra *a,
                                      const char *vars,
                                      uint32_t order,
                                      const char *text,
                                      struct MoravaSeries **out);

/**
 * # Safety
 * Handles must be live; `out` writable.
 */
enum MoravaStatus morava_series_add(const struct MoravaSeries *a,
                                    const struct MoravaSeries *b,
                                    struct MoravaSeries **out);

/**
 * # Safety
 * Handles must be live; `out` writable.
 */
enum MoravaStatus morava_series_mul(const struct MoravaSeries *a,
                                    const struct MoravaSeries *b,
                                    struct MoravaSeries **out);

/**
 * `f(g_0, ..., g_{k-1})`, one substitute per variable of `f`.
 *
 * # Safety
 * `f` must be live; `subs` must point to `nsubs` live handles; `out` writable.
 */
enum MoravaStatus morava_series_compose(const struct MoravaSeries *f,
                                        const struct MoravaSeries *const *subs,
                                        size_t nsubs,
                                        struct MoravaSeries **out);

/**
 * Compositional inverse of a univariate series with invertible linear term.
 *
 * # Safety
 * `f` must be live; `out` writable.
 */
enum MoravaStatus morava_series_inverse(const struct MoravaSeries *f, struct MoravaSeries **out);

/**
 * # Safety
 * `f` must be live; `out` writable.
 */
enum MoravaStatus morava_series_render(const struct MoravaSeries *f, char **out);

/**
 * # Safety
 * `f` must come from this library, or be null.
 */
void morava_series_free(struct MoravaSeries *f);

/**
 * Build one of `sigma`, `A`, `B`, `C`, `KK` at the given window.
 *
 * # Safety
 * `which` must be NUL-terminated; `out` writable.
 */
enum MoravaStatus morava_hopf_build(const char *which,
                                    uint32_t p,
                                    uint32_t n,
                                    uint32_t window,
                                    struct MoravaHopf **out);

/**
 * Coassociativity, counit and antipode checks up to `|degree| ≤ deg_bound`
 * (`deg_bound < 0` picks the default, three times the largest generator degree).
 *
 * # Safety
 * `h` must be live; `passed`, `total` writable.
 */
enum MoravaStatus morava_hopf_verify(const struct MoravaHopf *h,
                                     int64_t deg_bound,
                                     uint32_t *passed,
                                     uint32_t *total);

/**
 * Generators, relations and coproducts as JSON.
 *
 * # Safety
 * `h` must be live; `out` writable.
 */
enum MoravaStatus morava_hopf_to_json(const struct MoravaHopf *h, char **out);

/**
 * # Safety
 * `h` must come from this library, or be null.
 */
void morava_hopf_free(struct MoravaHopf *h);

/**
 * Run the command-line interface on `argv[0..argc]` (without the program
 * name). `*exit_code` receives 0 (all checks pass), 1 (a check failed) or 2
 * (error); `*out` receives what the command would print.
 *
 * # Safety
 * `argv` must point to `argc` NUL-terminated strings; outputs writable.
 */
enum MoravaStatus morava_cli(size_t argc, const char *const *argv, int32_t *exit_code, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MORAVA_H */
