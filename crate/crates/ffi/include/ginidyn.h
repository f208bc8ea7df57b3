/* C interface to the ginidyn library. Generated by cbindgen; do not edit. */

#ifndef GINIDYN_H
#define GINIDYN_H

/* Generated with cbindgen:0.26.0 */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible FFI call.
typedef enum GiniDynStatus {
  GiniDynStatus_Ok = 0,
  GiniDynStatus_NullPointer = 1,
  GiniDynStatus_InvalidArgument = 2,
  GiniDynStatus_NegativeMass = 3,
  GiniDynStatus_MassDefect = 4,
  GiniDynStatus_TruncationTooSmall = 5,
  GiniDynStatus_IndexOutOfRange = 6,
  GiniDynStatus_ZeroMean = 7,
  GiniDynStatus_NonIntegerMean = 8,
  GiniDynStatus_IntegerMean = 9,
  GiniDynStatus_InfeasibleMean = 10,
  GiniDynStatus_SupportTooLarge = 11,
  GiniDynStatus_InternalPanic = 12,
} GiniDynStatus;

// Opaque handle to a validated distribution on `{0, .., trunc}`.
typedef struct GiniDynDist GiniDynDist;

// One inequality evaluation: both sides, the slack `rhs - lhs`, and whether
// the bound held (slack >= -1e-12; two-sided for the `w1_dirac0` identity).
typedef struct GiniDynBoundReport {
  double lhs;
  double rhs;
  double slack;
  bool pass;
} GiniDynBoundReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Validates `probs[0..len]` as a distribution on `{0, .., len-1}`.
//
// # Safety
// `probs` must point to `len` readable doubles; `out` must be a valid
// out-pointer. On success the caller owns the handle written to `*out`.
enum GiniDynStatus ginidyn_dist_new(const double *probs, uintptr_t len, struct GiniDynDist **out);

// Builds the shifted Bernoulli distribution with mean `mu` on `{0, .., trunc}`.
//
// # Safety
// `out` must be a valid out-pointer.
enum GiniDynStatus ginidyn_dist_shifted_bernoulli(double mu,
                                                  uintptr_t trunc,
                                                  struct GiniDynDist **out);

// Builds the Dirac distribution at `n` on `{0, .., trunc}`.
//
// # Safety
// `out` must be a valid out-pointer.
enum GiniDynStatus ginidyn_dist_dirac(uintptr_t n, uintptr_t trunc, struct GiniDynDist **out);

// Draws a seeded random distribution with mean exactly `mu` on `{0, .., trunc}`.
//
// # Safety
// `out` must be a valid out-pointer.
enum GiniDynStatus ginidyn_sample_vmu(double mu,
                                      uintptr_t trunc,
                                      uint64_t seed,
                                      struct GiniDynDist **out);

// Releases a handle returned by any constructor. Null is a no-op.
//
// # Safety
// `dist` must be a handle from this library that has not been freed yet.
void ginidyn_dist_free(struct GiniDynDist *dist);

// Number of represented states (`trunc + 1`).
//
// # Safety
// Pointers must be valid.
enum GiniDynStatus ginidyn_dist_len(const struct GiniDynDist *dist, uintptr_t *out);

// Copies the mass entries into `buf[0..len]`; `len` must equal the value
// reported by [`ginidyn_dist_len`].
//
// # Safety
// `buf` must point to `len` writable doubles.
enum GiniDynStatus ginidyn_dist_probs(const struct GiniDynDist *dist, double *buf, uintptr_t len);

// First moment of the distribution.
//
// # Safety
// Pointers must be valid.
enum GiniDynStatus ginidyn_dist_mean(const struct GiniDynDist *dist, double *out);

// Gini index of the shifted Bernoulli distribution with mean `mu`
// (0 for integer `mu`).
double ginidyn_gini_equilibrium_value(double mu);

// Gini index via the prefix-sum evaluation of the double sum.
//
// # Safety
// Pointers must be valid.
enum GiniDynStatus ginidyn_gini_double_sum(const struct GiniDynDist *dist, double *out);

// Gini index via the CDF identity.
//
// # Safety
// Pointers must be valid.
enum GiniDynStatus ginidyn_gini_cdf(const struct GiniDynDist *dist, double *out);

// Gini index via the literal O(N^2) double sum (oracle).
//
// # Safety
// Pointers must be valid.
enum GiniDynStatus ginidyn_gini_iid_form(const struct GiniDynDist *dist, double *out);

// `Var[sqrt(X)]`.
//
// # Safety
// Pointers must be valid.
enum GiniDynStatus ginidyn_var_sqrt(const struct GiniDynDist *dist, double *out);

// Wasserstein-1 distance between two distributions.
//
// # Safety
// Pointers must be valid.
enum GiniDynStatus ginidyn_wasserstein1(const struct GiniDynDist *a,
                                        const struct GiniDynDist *b,
                                        double *out);

// `l^p` distance between two distributions (`p >= 1`).
//
// # Safety
// Pointers must be valid.
enum GiniDynStatus ginidyn_lp_distance(const struct GiniDynDist *a,
                                       const struct GiniDynDist *b,
                                       double p,
                                       double *out);

// Brute-force monotone-coupling transport cost (supports of at most 16
// states; oracle for `ginidyn_wasserstein1`).
//
// # Safety
// Pointers must be valid.
enum GiniDynStatus ginidyn_w1_bruteforce(const struct GiniDynDist *a,
                                         const struct GiniDynDist *b,
                                         double *out);

// Theorem 1: `W1(p, p*) <= c(mu) (G[p] - G[p*])`.
//
// # Safety
// Pointers must be valid.
enum GiniDynStatus ginidyn_check_thm1(const struct GiniDynDist *dist,
                                      struct GiniDynBoundReport *out);

// Theorem 2: `||p - delta_0||_1 <= 2 sqrt(mu) sqrt(1 - G[p])`.
//
// # Safety
// Pointers must be valid.
enum GiniDynStatus ginidyn_check_thm2(const struct GiniDynDist *dist,
                                      struct GiniDynBoundReport *out);

// Weak bound for integer mean: `W1(p, delta_mu) <= 2 sqrt(2) mu sqrt(G[p])`.
//
// # Safety
// Pointers must be valid.
enum GiniDynStatus ginidyn_check_weak_bound(const struct GiniDynDist *dist,
                                            struct GiniDynBoundReport *out);

// Reverse bound: `2 mu G[p] <= 2 E|X - mu|`.
//
// # Safety
// Pointers must be valid.
enum GiniDynStatus ginidyn_check_reverse_bound(const struct GiniDynDist *dist,
                                               struct GiniDynBoundReport *out);

// Key inequality: `mu G[p] >= max(upper tail, lower tail)`.
//
// # Safety
// Pointers must be valid.
enum GiniDynStatus ginidyn_check_key_inequality(const struct GiniDynDist *dist,
                                                struct GiniDynBoundReport *out);

// Identity `W1(p, delta_0) = mean(p)` (two-sided).
//
// # Safety
// Pointers must be valid.
enum GiniDynStatus ginidyn_check_w1_dirac0(const struct GiniDynDist *dist,
                                           struct GiniDynBoundReport *out);

// Both intermediate estimates behind the non-integer branch of Theorem 1.
//
// # Safety
// Pointers must be valid.
enum GiniDynStatus ginidyn_check_prop2_intermediates(const struct GiniDynDist *dist,
                                                     struct GiniDynBoundReport *w1_upper,
                                                     struct GiniDynBoundReport *gini_lower);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* GINIDYN_H */
