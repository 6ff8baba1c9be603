#ifndef TRIBRACKET_H
#define TRIBRACKET_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum TrbStatus {
  TRB_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  TRB_STATUS_NULL = 1,
  /**
   * Malformed text: JSON, PD, names, non-UTF-8.
   */
  TRB_STATUS_PARSE = 2,
  /**
   * Well-formed input that fails an axiom or a structural check.
   */
  TRB_STATUS_INVALID = 3,
  /**
   * A coefficient is not a unit.
   */
  TRB_STATUS_NON_UNIT = 4,
  /**
   * A resource guard refused the request.
   */
  TRB_STATUS_GUARD = 5,
  /**
   * Anything else, including panics.
   */
  TRB_STATUS_INTERNAL = 6,
} TrbStatus;

typedef struct TrbBracket TrbBracket;

typedef struct TrbDiagram TrbDiagram;

typedef struct TrbTribracket TrbTribracket;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *trb_last_error(void);

/**
 * # Safety
 * `s` must come from this library, or be null.
 */
void trb_string_free(char *s);

/**
 * Parses `{"n": .., "tensor": ..}` or a bare one-based tensor. The axioms
 * are not checked; see `trb_tribracket_verify`.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum TrbStatus trb_tribracket_from_json(const char *json, struct TrbTribracket **out);

/**
 * Built-in tribracket by name (`x3`, `x2`, `trivial`).
 *
 * # Safety
 * `name` must be a nul-terminated string and `out` a valid pointer.
 */
enum TrbStatus trb_tribracket_builtin(const char *name, struct TrbTribracket **out);

/**
 * # Safety
 * `x` must be a live handle or null.
 */
void trb_tribracket_free(struct TrbTribracket *x);

/**
 * Number of elements, or 0 for a null handle.
 *
 * # Safety
 * `x` must be a live handle or null.
 */
size_t trb_tribracket_size(const struct TrbTribracket *x);

/**
 * Writes whether both tribracket axioms hold.
 *
 * # Safety
 * `x` must be a live handle and `valid` a valid pointer.
 */
enum TrbStatus trb_tribracket_verify(const struct TrbTribracket *x, bool *valid);

/**
 * `[a,b,c]` with one-based labels.
 *
 * # Safety
 * `x` must be a live handle and `out` a valid pointer.
 */
enum TrbStatus trb_tribracket_eval(const struct TrbTribracket *x,
                                   size_t a,
                                   size_t b,
                                   size_t c,
                                   size_t *out);

/**
 * Parses and fully verifies a bracket (corrected skein form).
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum TrbStatus trb_bracket_from_json(const char *json, struct TrbBracket **out);

/**
 * Built-in bracket by name (`z7`, `beta1`, `beta2`).
 *
 * # Safety
 * `name` must be a nul-terminated string and `out` a valid pointer.
 */
enum TrbStatus trb_bracket_builtin(const char *name, struct TrbBracket **out);

/**
 * # Safety
 * `b` must be a live handle or null.
 */
void trb_bracket_free(struct TrbBracket *b);

/**
 * Modulus of the coefficient ring, or 0 for a null handle.
 *
 * # Safety
 * `b` must be a live handle or null.
 */
uint32_t trb_bracket_modulus(const struct TrbBracket *b);

/**
 * Residues of δ and w.
 *
 * # Safety
 * `b` must be a live handle; `delta` and `w` valid pointers.
 */
enum TrbStatus trb_bracket_delta_w(const struct TrbBracket *b, uint32_t *delta, uint32_t *w);

/**
 * Builds a diagram from PD text; bit `i` of `mask` reverses component `i`.
 *
 * # Safety
 * `pd` must be a nul-terminated string and `out` a valid pointer.
 */
enum TrbStatus trb_diagram_from_pd(const char *pd, uint64_t mask, struct TrbDiagram **out);

/**
 * Builds the diagram of a catalog entry with its default orientation.
 *
 * # Safety
 * `name` must be a nul-terminated string and `out` a valid pointer.
 */
enum TrbStatus trb_diagram_from_catalog(const char *name, struct TrbDiagram **out);

/**
 * # Safety
 * `d` must be a live handle or null.
 */
void trb_diagram_free(struct TrbDiagram *d);

/**
 * Crossing count, or 0 for a null handle.
 *
 * # Safety
 * `d` must be a live handle or null.
 */
size_t trb_diagram_crossings(const struct TrbDiagram *d);

/**
 * Number of colorings of `d` by `x`.
 *
 * # Safety
 * Both handles must be live and `out` a valid pointer.
 */
enum TrbStatus trb_counting_invariant(const struct TrbDiagram *d,
                                      const struct TrbTribracket *x,
                                      uint64_t *out);

/**
 * Φ of `d` under `b`, as the canonical string (`json == false`) or as
 * `{"modulus": m, "terms": {..}}`. Free the result with `trb_string_free`.
 *
 * # Safety
 * Both handles must be live and `out` a valid pointer.
 */
enum TrbStatus trb_phi(const struct TrbDiagram *d,
                       const struct TrbBracket *b,
                       bool json,
                       char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRIBRACKET_H */
