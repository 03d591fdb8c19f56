#ifndef CHARCALC_H
#define CHARCALC_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum CharcalcStatus {
  CHARCALC_STATUS_OK = 0,
  CHARCALC_STATUS_NULL_POINTER = 1,
  CHARCALC_STATUS_INVALID_UTF8 = 2,
  CHARCALC_STATUS_PARSE = 3,
  CHARCALC_STATUS_INVALID_TABLE = 4,
  CHARCALC_STATUS_FORBIDDEN_MULTIPLICITY = 5,
  CHARCALC_STATUS_PRECONDITION = 6,
  CHARCALC_STATUS_DOMAIN = 7,
  CHARCALC_STATUS_INVALID_DIAMOND = 8,
  CHARCALC_STATUS_INTERNAL = 9,
} CharcalcStatus;

/*
 Opaque Hodge diamond handle.
 */
typedef struct CharcalcDiamond CharcalcDiamond;

/*
 Opaque pair handle.
 */
typedef struct CharcalcPair CharcalcPair;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread; empty after a success.
 Valid until the next call on the same thread.
 */
const char *charcalc_last_error(void);

/*
 # Safety
 `s` must be null or a string returned by this library.
 */
void charcalc_string_free(char *s);

/*
 Parses a stratum-table JSON document.

 # Safety
 `json` must be a NUL-terminated string and `out` writable.
 */
enum CharcalcStatus charcalc_pair_from_json(const char *json, struct CharcalcPair **out);

/*
 The pair `(CP^r, sum m_j H_j + m_inf H_inf)`.

 # Safety
 `mults` must point to `s` values (may be null when `s == 0`); `out` writable.
 */
enum CharcalcStatus charcalc_pair_cp(uint32_t r,
                                     uint32_t s,
                                     int64_t d,
                                     const int64_t *mults,
                                     struct CharcalcPair **out);

/*
 # Safety
 `pair` must be null or a handle from this library, freed at most once.
 */
void charcalc_pair_free(struct CharcalcPair *pair);

/*
 Number of divisor components.

 # Safety
 `pair` must be a live handle and `out` writable.
 */
enum CharcalcStatus charcalc_pair_num_components(const struct CharcalcPair *pair, size_t *out);

/*
 Weighted Euler characteristic as a rational string.

 # Safety
 `pair` must be a live handle and `out` writable.
 */
enum CharcalcStatus charcalc_pair_chi_d(const struct CharcalcPair *pair, char **out);

/*
 Blows up the center. `out_equal` receives whether the weighted Euler
 characteristic is unchanged and `out_m0` the exceptional multiplicity.

 # Safety
 `pair` must be a live handle; outputs writable.
 */
enum CharcalcStatus charcalc_pair_blowup_check(const struct CharcalcPair *pair,
                                               bool *out_equal,
                                               int64_t *out_m0);

/*
 Blown-up pair as a new handle.

 # Safety
 `pair` must be a live handle and `out` writable.
 */
enum CharcalcStatus charcalc_pair_blowup(const struct CharcalcPair *pair,
                                         struct CharcalcPair **out);

/*
 Checks the total-class identities for `1..=max_m` roots.

 # Safety
 `out_all_zero` must be writable.
 */
enum CharcalcStatus charcalc_identities_check(size_t max_m, bool *out_all_zero);

/*
 `chi(CP^n, Omega^p(twist))` as a rational string.

 # Safety
 `out` must be writable.
 */
enum CharcalcStatus charcalc_hrr_chi_cp(size_t n, size_t p, int64_t twist, char **out);

/*
 Parses `{"n": .., "h": [[..], ..]}`.

 # Safety
 `json` must be a NUL-terminated string and `out` writable.
 */
enum CharcalcStatus charcalc_diamond_from_json(const char *json, struct CharcalcDiamond **out);

/*
 `point`, `cpN`, `elliptic`, `k3` or `quintic`.

 # Safety
 `name` must be a NUL-terminated string and `out` writable.
 */
enum CharcalcStatus charcalc_diamond_builtin(const char *name, struct CharcalcDiamond **out);

/*
 # Safety
 `d` must be null or a handle from this library, freed at most once.
 */
void charcalc_diamond_free(struct CharcalcDiamond *d);

/*
 `b_k`, zero outside `0..=2n`.

 # Safety
 `d` must be a live handle and `out` writable.
 */
enum CharcalcStatus charcalc_diamond_betti(const struct CharcalcDiamond *d,
                                           int64_t k,
                                           uint64_t *out);

/*
 # Safety
 `d` must be a live handle and `out` writable.
 */
enum CharcalcStatus charcalc_diamond_euler(const struct CharcalcDiamond *d, int64_t *out);

/*
 # Safety
 Handles must be live and `out` writable.
 */
enum CharcalcStatus charcalc_diamond_blowup(const struct CharcalcDiamond *x,
                                            const struct CharcalcDiamond *y,
                                            size_t codim,
                                            struct CharcalcDiamond **out);

/*
 # Safety
 `base` must be a live handle and `out` writable.
 */
enum CharcalcStatus charcalc_diamond_bundle(const struct CharcalcDiamond *base,
                                            size_t fiber_dim,
                                            struct CharcalcDiamond **out);

/*
 `sum_k (-1)^k k(n-k) b_k` as a rational string.

 # Safety
 `d` must be a live handle and `out` writable.
 */
enum CharcalcStatus charcalc_diamond_correction(const struct CharcalcDiamond *d, char **out);

/*
 # Safety
 `d` must be a live handle and `out` writable.
 */
enum CharcalcStatus charcalc_diamond_lambda_check(const struct CharcalcDiamond *d, bool *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CHARCALC_H */
