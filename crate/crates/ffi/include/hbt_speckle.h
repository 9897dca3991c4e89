#ifndef HBT_SPECKLE_H
#define HBT_SPECKLE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum HbtStatus {
  HBT_STATUS_OK = 0,
  HBT_STATUS_NULL_POINTER = 1,
  HBT_STATUS_INVALID_ARGUMENT = 2,
  HBT_STATUS_OUT_OF_RANGE = 3,
  HBT_STATUS_NUMERICAL = 4,
  HBT_STATUS_BUFFER_TOO_SMALL = 5,
  HBT_STATUS_PANIC = 6,
} HbtStatus;

typedef enum HbtChannel {
  HBT_CHANNEL_SINGLE = 0,
  HBT_CHANNEL_DISTINGUISHABLE = 1,
  HBT_CHANNEL_BOSONIC = 2,
  HBT_CHANNEL_FERMIONIC = 3,
} HbtChannel;

// A disordered chain with its lazily computed eigendecompositions.
typedef struct HbtChain HbtChain;

// Phasor decomposition of one transition amplitude.
typedef struct HbtPhasors HbtPhasors;

// Statistics of an intensity series.
typedef struct HbtSummary {
  double mean;
  double std_dev;
  double contrast;
  // `<I^2>/<I>^2`, `<I^3>/<I>^3`, `<I^4>/<I>^4`.
  double normalized_moments[3];
  size_t count;
} HbtSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *hbt_version(void);

// Message of the last failed call on this thread, or NULL after a
// successful one. Valid until the next call into the library.
const char *hbt_last_error(void);

// Chain of `n` sites with hopping `j`, on-site interaction `u` and
// disorder drawn uniformly from `[-w/2, w/2]` with `seed`.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum HbtStatus hbt_chain_new(size_t n,
                             double j,
                             double w,
                             double u,
                             uint64_t seed,
                             struct HbtChain **out);

// Chain with explicit on-site energies `epsilons[0..n]`.
//
// # Safety
// `epsilons` must point to `n` readable doubles and `out` to writable
// storage for one handle.
enum HbtStatus hbt_chain_with_disorder(size_t n,
                                       double j,
                                       double u,
                                       const double *epsilons,
                                       struct HbtChain **out);

// # Safety
// `chain` must be NULL or a handle from `hbt_chain_new` not yet freed.
void hbt_chain_free(struct HbtChain *chain);

// Copies the on-site energies into `out[0..len]`; `len` must be at least
// the number of sites.
//
// # Safety
// `chain` must be a live handle and `out` must point to `len` writable
// doubles.
enum HbtStatus hbt_chain_disorder(const struct HbtChain *chain, double *out, size_t len);

// Phasors of the `channel` transition `(m, n) -> (p, q)`. The single
// channel uses `m` and `p` only.
//
// # Safety
// `chain` must be a live handle and `out` writable storage for one handle.
enum HbtStatus hbt_phasors_new(const struct HbtChain *chain,
                               enum HbtChannel channel,
                               size_t m,
                               size_t n,
                               size_t p,
                               size_t q,
                               struct HbtPhasors **out);

// # Safety
// `phasors` must be NULL or a handle from `hbt_phasors_new` not yet freed.
void hbt_phasors_free(struct HbtPhasors *phasors);

// Number of phasors, or 0 for NULL.
//
// # Safety
// `phasors` must be NULL or a live handle.
size_t hbt_phasors_len(const struct HbtPhasors *phasors);

// Coefficient, energy and bound flag of phasor `k`. Any out-pointer may
// be NULL.
//
// # Safety
// `phasors` must be a live handle; non-NULL out-pointers must be writable.
enum HbtStatus hbt_phasors_get(const struct HbtPhasors *phasors,
                               size_t k,
                               double *coefficient,
                               double *energy,
                               bool *bound);

// Amplitude `sum_k b_k exp(-i E_k t)`.
//
// # Safety
// `phasors` must be a live handle; `re` and `im` must be writable.
enum HbtStatus hbt_phasors_amplitude(const struct HbtPhasors *phasors,
                                     double t,
                                     double *re,
                                     double *im);

// Intensities at `t_start + i * step` for `i < count`, written to
// `out[0..count]`.
//
// # Safety
// `phasors` must be a live handle and `out` must point to `count`
// writable doubles.
enum HbtStatus hbt_phasors_intensity_series(const struct HbtPhasors *phasors,
                                            double t_start,
                                            double step,
                                            size_t count,
                                            double *out);

// Mean, contrast and normalized moments of `intensities[0..len]`.
//
// # Safety
// `intensities` must point to `len` readable doubles and `out` must be
// writable.
enum HbtStatus hbt_summarize(const double *intensities, size_t len, struct HbtSummary *out);

// Exponential density `exp(-i/s)/s`.
//
// # Safety
// `out` must be writable.
enum HbtStatus hbt_pdf_exponential(double i, double s, double *out);

// K density with mean `mu` and shape `nu`.
//
// # Safety
// `out` must be writable.
enum HbtStatus hbt_pdf_k(double i, double mu, double nu, double *out);

// Stretched-exponential density of mean `alpha` with contrast sqrt(5).
//
// # Safety
// `out` must be writable.
enum HbtStatus hbt_pdf_weibull_bound(double i, double alpha, double *out);

// Rician density with dominant-to-diffuse ratio `r` and diffuse mean `s_n`.
//
// # Safety
// `out` must be writable.
enum HbtStatus hbt_pdf_rician(double i, double r, double s_n, double *out);

// Rician density averaged over `r_samples[0..len]`.
//
// # Safety
// `r_samples` must point to `len` readable doubles and `out` must be
// writable.
enum HbtStatus hbt_pdf_compound_rician(double i,
                                       const double *r_samples,
                                       size_t len,
                                       double s_n,
                                       double *out);

// Ratio `r` of the Rician law whose contrast is `c`, for `0 < c <= 1`.
//
// # Safety
// `out` must be writable.
enum HbtStatus hbt_rician_ratio_for_contrast(double c, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HBT_SPECKLE_H */
