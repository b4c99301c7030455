#ifndef TRIPLE_EIS_H
#define TRIPLE_EIS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes of the C interface.
 */
typedef enum TeStatus {
  /**
   * Success.
   */
  TE_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  TE_STATUS_NULL_POINTER = 1,
  /**
   * An input lies outside the domain of the operation.
   */
  TE_STATUS_DOMAIN = 2,
  /**
   * The input needs a feature this build does not provide.
   */
  TE_STATUS_UNSUPPORTED = 3,
  /**
   * A work budget was exceeded.
   */
  TE_STATUS_RESOURCE = 4,
  /**
   * A degree-stabilization check failed.
   */
  TE_STATUS_NON_STABILIZATION = 5,
  /**
   * Internal consistency failure.
   */
  TE_STATUS_INTERNAL = 6,
  /**
   * Malformed input text.
   */
  TE_STATUS_PARSE = 7,
  /**
   * An output buffer is too small; the required length was written.
   */
  TE_STATUS_BUFFER_TOO_SMALL = 8,
} TeStatus;

/**
 * Opaque four-variable family.
 */
typedef struct TeFamily TeFamily;

/**
 * Opaque truncated q-expansion.
 */
typedef struct TeQExpansion TeQExpansion;

/**
 * Message of the last failure on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread; do not free it.
 */
const char *te_last_error(void);

/**
 * Frees a string returned by this library.
 *
 * # Safety
 * `s` must be null or a pointer returned by this library that has not been
 * freed.
 */
void te_string_free(char *s);

/**
 * Creates a family for the odd prime `p`, square-free tame level
 * `tame_level`, twist exponent `twist`, tame character exponents
 * `chi[0..3]`, series caps `caps[0..4]` and precision `precision`.
 *
 * # Safety
 * `chi` must point to 3 and `caps` to 4 readable values; `out` must be
 * writable.
 */
enum TeStatus te_family_new(uint64_t p,
                            uint64_t tame_level,
                            uint64_t twist,
                            const uint64_t *chi,
                            const uintptr_t *caps,
                            uint32_t precision,
                            struct TeFamily **out);

/**
 * Releases a family.
 *
 * # Safety
 * `family` must be null or a handle from [`te_family_new`] not yet freed.
 */
void te_family_free(struct TeFamily *family);

/**
 * Computes the q-expansion over diagonals up to `diagonal_bound`.
 *
 * # Safety
 * `family` must be a live handle and `out` writable.
 */
enum TeStatus te_family_q_expansion(const struct TeFamily *family,
                                    int64_t diagonal_bound,
                                    struct TeQExpansion **out);

/**
 * Releases a q-expansion.
 *
 * # Safety
 * `expansion` must be null or a live handle not yet freed.
 */
void te_qexpansion_free(struct TeQExpansion *expansion);

/**
 * Number of diagonal coefficients in the expansion (0 for null).
 *
 * # Safety
 * `expansion` must be null or a live handle.
 */
uintptr_t te_qexpansion_len(const struct TeQExpansion *expansion);

/**
 * The expansion serialized as JSON; free with [`te_string_free`].
 *
 * # Safety
 * `expansion` must be a live handle and `out` writable.
 */
enum TeStatus te_qexpansion_to_json(const struct TeQExpansion *expansion, char **out);

/**
 * Specializes the expansion at `(k1, k2, k3, kP)` given in `point[0..4]`
 * and writes the classical coefficients as a JSON object keyed by
 * diagonal; free with [`te_string_free`].
 *
 * # Safety
 * `expansion` must be a live handle, `point` must point to 4 readable
 * values and `out` must be writable.
 */
enum TeStatus te_qexpansion_specialize(const struct TeQExpansion *expansion,
                                       const int64_t *point,
                                       char **out);

/**
 * Coefficients of the local Siegel series polynomial `F_{B,l}`.
 *
 * `entries` holds 1, 3 or 6 values: `b11`, `b11,b22,c12` or
 * `b11,b22,b33,c23,c13,c12` with doubled off-diagonal entries. Up to
 * `capacity` coefficients are written to `coefficients`; the degree plus
 * one is written to `len`. When the buffer is too small nothing else is
 * written and [`TeStatus::BufferTooSmall`] is returned.
 *
 * # Safety
 * `entries` must point to `count` values, `coefficients` to `capacity`
 * writable values (or be null when `capacity` is 0) and `len` must be
 * writable.
 */
enum TeStatus te_siegel_polynomial(const int64_t *entries,
                                   uintptr_t count,
                                   uint64_t prime,
                                   int64_t *coefficients,
                                   uintptr_t capacity,
                                   uintptr_t *len);

/**
 * Runs one verification suite by name and writes whether it passed.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `passed` writable.
 */
enum TeStatus te_verify_suite(const char *name,
                              uint64_t p,
                              uint64_t seed,
                              uintptr_t trials,
                              bool *passed);

#endif  /* TRIPLE_EIS_H */
