#ifndef LASTSQ_H
#define LASTSQ_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LastsqStatus {
  LASTSQ_STATUS_OK = 0,
  LASTSQ_STATUS_NULL_POINTER = 1,
  LASTSQ_STATUS_INVALID_UTF8 = 2,
  LASTSQ_STATUS_PARSE = 3,
  LASTSQ_STATUS_RANGE = 4,
  LASTSQ_STATUS_SIZE_LIMIT = 5,
  LASTSQ_STATUS_NOT_PLUS_CLASS = 6,
  LASTSQ_STATUS_OUTSIDE_DOMAIN = 7,
  // The arrangement is one of the two exceptional arrangements of the
  // conjugation; no image is produced.
  LASTSQ_STATUS_EXCEPTIONAL = 8,
  LASTSQ_STATUS_INVALID_ARGUMENT = 9,
  LASTSQ_STATUS_INTERNAL = 10,
  LASTSQ_STATUS_PANIC = 11,
} LastsqStatus;

typedef enum LastsqSign {
  LASTSQ_SIGN_PLUS = 0,
  LASTSQ_SIGN_MINUS = 1,
  LASTSQ_SIGN_ANY = 2,
} LastsqSign;

typedef enum LastsqFamily {
  LASTSQ_FAMILY_DOMINO = 0,
  LASTSQ_FAMILY_SQUARE = 1,
} LastsqFamily;

typedef enum LastsqParity {
  LASTSQ_PARITY_EVEN = 0,
  LASTSQ_PARITY_ODD = 1,
  LASTSQ_PARITY_ANY = 2,
} LastsqParity;

// Opaque domino arrangement (dominoes and black/white squares).
typedef struct LastsqDomino LastsqDomino;

// Opaque square arrangement (white/black/decorated cells).
typedef struct LastsqSquare LastsqSquare;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread, or NULL. The pointer
// stays valid until the next call into the library on the same thread.
const char *lastsq_last_error(void);

// Library version as a static string.
const char *lastsq_version(void);

// # Safety
// `s` must be NULL or a string returned by this library and not yet freed.
void lastsq_string_free(char *s);

// Decodes a square arrangement from its `b`/`t`/`w` encoding.
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be writable.
enum LastsqStatus lastsq_square_decode(const char *text, struct LastsqSquare **out);

// # Safety
// `handle` must be NULL or a live square handle; it is invalid afterwards.
void lastsq_square_free(struct LastsqSquare *handle);

// Canonical encoding, or NULL for a NULL handle. Free with
// [`lastsq_string_free`].
//
// # Safety
// `handle` must be NULL or a live square handle.
char *lastsq_square_encode(const struct LastsqSquare *handle);

// Writes board length, black count and weight.
//
// # Safety
// `handle` must be a live square handle; the out pointers must be writable.
enum LastsqStatus lastsq_square_stats(const struct LastsqSquare *handle,
                                      size_t *out_len,
                                      size_t *out_blacks,
                                      size_t *out_weight);

// # Safety
// `handle` must be a live square handle; `out` must be writable.
enum LastsqStatus lastsq_square_sign(const struct LastsqSquare *handle, enum LastsqSign *out);

// Decodes a domino arrangement from its `b`/`d`/`w` encoding.
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be writable.
enum LastsqStatus lastsq_domino_decode(const char *text, struct LastsqDomino **out);

// # Safety
// `handle` must be NULL or a live domino handle; it is invalid afterwards.
void lastsq_domino_free(struct LastsqDomino *handle);

// # Safety
// `handle` must be NULL or a live domino handle.
char *lastsq_domino_encode(const struct LastsqDomino *handle);

// Writes board length `m` and domino count `r`.
//
// # Safety
// `handle` must be a live domino handle; the out pointers must be writable.
enum LastsqStatus lastsq_domino_stats(const struct LastsqDomino *handle,
                                      size_t *out_cells,
                                      size_t *out_dominoes);

// # Safety
// `handle` must be a live domino handle; `out` must be writable.
enum LastsqStatus lastsq_domino_sign(const struct LastsqDomino *handle, enum LastsqSign *out);

// Maps a plus-class domino arrangement on `m` cells with `r` dominoes to a
// plus-class square arrangement on `m-1-r` cells.
//
// # Safety
// `handle` must be a live domino handle; `out` must be writable.
enum LastsqStatus lastsq_domino_to_square(const struct LastsqDomino *handle,
                                          struct LastsqSquare **out);

// Inverse of [`lastsq_domino_to_square`].
//
// # Safety
// `handle` must be a live square handle; `out` must be writable.
enum LastsqStatus lastsq_square_to_domino(const struct LastsqSquare *handle,
                                          struct LastsqDomino **out);

// Conjugate of a square arrangement. Returns `EXCEPTIONAL` (and writes
// NULL) for the exceptional arrangement, `OUTSIDE_DOMAIN` when the input is
// neither plus with odd weight nor minus with even weight.
//
// # Safety
// `handle` must be a live square handle; `out` must be writable.
enum LastsqStatus lastsq_conjugate(const struct LastsqSquare *handle, struct LastsqSquare **out);

// Evaluates sum `S`, `T`, `U`, `V` or `W` and writes its decimal value.
//
// # Safety
// `out` must be writable; the string written there must be freed with
// [`lastsq_string_free`].
enum LastsqStatus lastsq_eval(char sum, size_t size, size_t r, char **out);

// Counts arrangements of a family by brute-force enumeration and writes
// the decimal count. Parity filters apply only to the square family.
//
// # Safety
// `out` must be writable; free the result with [`lastsq_string_free`].
enum LastsqStatus lastsq_count(enum LastsqFamily family,
                               size_t size,
                               size_t r,
                               enum LastsqSign sign,
                               enum LastsqParity parity,
                               char **out);

// Runs a verification suite (`theorem`, `lemma`, `strata`, `bijections`,
// `auxiliary`) up to `limit` and writes the reports as JSON lines. The
// number of failed checks goes to `out_failures`.
//
// # Safety
// `suite` must be a NUL-terminated string; out pointers must be writable.
enum LastsqStatus lastsq_verify(const char *suite,
                                size_t limit,
                                char **out_json,
                                size_t *out_failures);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LASTSQ_H */
