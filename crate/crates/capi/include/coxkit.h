#ifndef COXKIT_H
#define COXKIT_H

/* Generated by the coxkit-capi build script; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define COXKIT_OK 0

#define COXKIT_ERR_INVALID 1

#define COXKIT_INCONCLUSIVE 2

#define COXKIT_ERR_NULL 3

#define COXKIT_ERR_INTERNAL 4

// A reusable ball-of-elements handle for repeated searches. Owns its own
// copy of the system, so it stays valid after the system handle is freed.
typedef struct CoxkitBall CoxkitBall;

// A Coxeter system handle.
typedef struct CoxkitSystem CoxkitSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static string; do not free.
const char *coxkit_version(void);

// Message for the most recent failure on this thread; do not free.
const char *coxkit_last_error(void);

// Releases a string returned by this library. NULL is ignored.
void coxkit_string_free(char *s);

// Parses `{"generators": [...], "m": [[...]]}` (0 encodes an infinite bond)
// into a new system handle.
int coxkit_system_from_json(const char *json, struct CoxkitSystem **out);

void coxkit_system_free(struct CoxkitSystem *h);

int coxkit_system_rank(const struct CoxkitSystem *h, uint32_t *out);

// ShortLex normal form of a whitespace-separated word ("e" for identity).
int coxkit_normal_form(const struct CoxkitSystem *h, const char *word, char **out);

int coxkit_multiply(const struct CoxkitSystem *h, const char *a, const char *b, char **out);

int coxkit_invert(const struct CoxkitSystem *h, const char *word, char **out);

// Reflection-diagram report for a generator subset, as JSON. `subset` is a
// whitespace-separated list of generator names, or NULL for all of them.
int coxkit_classify(const struct CoxkitSystem *h, const char *subset, char **out);

// Parabolic closure of the cyclic subgroup generated by the word, as JSON.
int coxkit_parabolic_closure(const struct CoxkitSystem *h, const char *word, char **out);

// Rank-one decision for the word, as JSON.
int coxkit_rank_one(const struct CoxkitSystem *h, const char *word, char **out);

// Builds a ball of all elements within the given word length.
int coxkit_ball_build(const struct CoxkitSystem *h, uint32_t radius, struct CoxkitBall **out);

void coxkit_ball_free(struct CoxkitBall *h);

int coxkit_ball_len(const struct CoxkitBall *h, uint64_t *out);

// Searches a shared ball for an independent element commuting with the
// word. Returns COXKIT_OK when a witness is found, COXKIT_INCONCLUSIVE
// when the ball is exhausted; the JSON report is written either way.
int coxkit_z2_witness(const struct CoxkitSystem *h,
                      const struct CoxkitBall *ball,
                      const char *word,
                      char **out);

// Searches for (a, b) with word2^n = a word1^n b for all n up to the
// horizon. Returns COXKIT_OK when witnessed, COXKIT_INCONCLUSIVE when the
// bounds are exhausted; the JSON report is written either way.
int coxkit_equivalence_witness(const struct CoxkitSystem *h,
                               const char *word1,
                               const char *word2,
                               uint32_t bound,
                               uint32_t horizon,
                               char **out);

// Axis-counting evaluation: value of the counting function attached to the
// axis word at the query word.
int coxkit_axis_count(const struct CoxkitSystem *h,
                      const char *axis_word,
                      const char *query_word,
                      int64_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COXKIT_H */
