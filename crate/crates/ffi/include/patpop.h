#ifndef PATPOP_H
#define PATPOP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PatpopStatus {
  PATPOP_STATUS_OK = 0,
  PATPOP_STATUS_NULL_POINTER = 1,
  PATPOP_STATUS_INVALID_UTF8 = 2,
  PATPOP_STATUS_MALFORMED = 3,
  PATPOP_STATUS_INVALID_QUERY = 4,
  PATPOP_STATUS_DOMAIN = 5,
  PATPOP_STATUS_VERIFICATION = 6,
  PATPOP_STATUS_INSUFFICIENT_DATA = 7,
  PATPOP_STATUS_NUMERIC = 8,
  PATPOP_STATUS_UNSUPPORTED = 9,
  PATPOP_STATUS_PANIC = 10,
} PatpopStatus;

/**
 * Opaque lexicographic iterator over a class.
 */
typedef struct PatpopClassIter PatpopClassIter;

/**
 * Opaque set of avoided patterns.
 */
typedef struct PatpopPatternSet PatpopPatternSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. Valid until the
 * next call into the library from the same thread.
 */
const char *patpop_last_error(void);

/**
 * Releases a string returned by the library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void patpop_string_free(char *s);

/**
 * Parses comma-separated compact patterns such as `"123,132"`.
 *
 * # Safety
 * `text` must be a nul-terminated string; `out` must be writable.
 */
enum PatpopStatus patpop_pattern_set_parse(const char *text, struct PatpopPatternSet **out);

/**
 * # Safety
 * `set` must come from [`patpop_pattern_set_parse`] or be null.
 */
void patpop_pattern_set_free(struct PatpopPatternSet *set);

/**
 * `|Av_n(set)|` as a decimal string.
 *
 * # Safety
 * `set` must be a live handle; `out` must be writable.
 */
enum PatpopStatus patpop_class_size(const struct PatpopPatternSet *set, size_t n, char **out);

/**
 * Total occurrences of `pattern` over `Av_n(set)` and the ratio
 * `count / (n |Av_n|)` as `"num/den"`, or `"N/A"` when undefined.
 *
 * # Safety
 * `set` must be a live handle, `pattern` nul-terminated, outputs writable.
 */
enum PatpopStatus patpop_popularity(const struct PatpopPatternSet *set,
                                    const char *pattern,
                                    size_t n,
                                    char **count_out,
                                    char **ratio_out);

/**
 * Starts a lexicographic walk over `Av_n(set)`.
 *
 * # Safety
 * `set` must be a live handle; `out` must be writable.
 */
enum PatpopStatus patpop_class_iter_new(const struct PatpopPatternSet *set,
                                        size_t n,
                                        struct PatpopClassIter **out);

/**
 * Writes the next member as a comma-separated word, or null once the
 * walk is finished.
 *
 * # Safety
 * `iter` must be a live handle; `out` must be writable.
 */
enum PatpopStatus patpop_class_iter_next(struct PatpopClassIter *iter, char **out);

/**
 * # Safety
 * `iter` must come from [`patpop_class_iter_new`] or be null.
 */
void patpop_class_iter_free(struct PatpopClassIter *iter);

/**
 * Involution (one-line, comma-separated) to its hat word.
 *
 * # Safety
 * `involution` must be nul-terminated; `out` must be writable.
 */
enum PatpopStatus patpop_foata_hat(const char *involution, char **out);

/**
 * Word avoiding consecutive 123 and 132 back to its involution.
 *
 * # Safety
 * `word` must be nul-terminated; `out` must be writable.
 */
enum PatpopStatus patpop_foata_unhat(const char *word, char **out);

/**
 * Standard cycle form of an involution, e.g. `"(9)(6 8)(5)(4)(2 3)(1 7)"`.
 *
 * # Safety
 * `involution` must be nul-terminated; `out` must be writable.
 */
enum PatpopStatus patpop_standard_form(const char *involution, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PATPOP_H */
