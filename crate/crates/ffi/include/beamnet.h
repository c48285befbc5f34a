/* C interface to the beamnet directional-network analysis library. */

#ifndef BEAMNET_H
#define BEAMNET_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum BnStatus {
  BnOk = 0,
  /**
   * A required pointer argument was null.
   */
  BnNullArgument = 1,
  /**
   * A parameter violated its documented constraint.
   */
  BnInvalidArgument = 2,
  /**
   * Quadrature, root finding, or bracketing failed.
   */
  BnNumericFailure = 3,
} BnStatus;

/**
 * Opaque orientation-error model handle.
 */
typedef struct BnErrorModel BnErrorModel;

/**
 * Opaque network-parameter handle.
 */
typedef struct BnParams BnParams;

/**
 * Opaque radiation pattern handle.
 */
typedef struct BnPattern BnPattern;

/**
 * Throughput-style result (spatial throughput or transmission capacity).
 */
typedef struct BnThroughput {
  /**
   * Successful transmissions per m^2.
   */
  double value;
  /**
   * Intensity achieving it, per m^2.
   */
  double lambda_star;
  /**
   * Success probability at `lambda_star`.
   */
  double p_s_at_star;
  /**
   * Beamwidth used, radians.
   */
  double omega;
  /**
   * 0 when the outage constraint is unattainable (value reported as 0).
   */
  int32_t feasible;
} BnThroughput;

/**
 * TC-maximizing beamwidth result.
 */
typedef struct BnMaximizer {
  /**
   * Maximizing beamwidth, radians.
   */
  double omega_star;
  /**
   * 1 when the boundary condition promoted `omega* = 2 eps_max`.
   */
  int32_t boundary;
  /**
   * 1 when the error cdf failed the concavity diagnostic.
   */
  int32_t non_concave_warning;
} BnMaximizer;

/**
 * Monte Carlo estimate with its 95% Wilson interval.
 */
typedef struct BnSimEstimate {
  double p_hat;
  double ci_low;
  double ci_high;
  uint64_t replications;
} BnSimEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null when the
 * last call succeeded. Valid until the next failing call on this thread.
 */
const char *bn_last_error_message(void);

/**
 * Omni-directional pattern (unit gain everywhere).
 *
 * # Safety
 * `out` must be a valid pointer; the returned handle must be released with
 * [`bn_pattern_free`].
 */
enum BnStatus bn_pattern_omni(struct BnPattern **out);

/**
 * Ideal sector of beamwidth `omega` (radians) and sidelobe gain `g2`.
 *
 * # Safety
 * See [`bn_pattern_omni`].
 */
enum BnStatus bn_pattern_ideal_sector(double omega, double g2, struct BnPattern **out);

/**
 * Sector with a linear transition of width `gamma` (radians).
 *
 * # Safety
 * See [`bn_pattern_omni`].
 */
enum BnStatus bn_pattern_transition_sector(double omega,
                                           double gamma,
                                           double g2,
                                           struct BnPattern **out);

/**
 * 3GPP-style sector; the mainlobe gain is solved for unit TRP.
 *
 * # Safety
 * See [`bn_pattern_omni`].
 */
enum BnStatus bn_pattern_three_gpp_sector(double omega, double g2, struct BnPattern **out);

/**
 * Linear power gain at angle `theta` (radians, any value; wrapped).
 *
 * # Safety
 * `pattern` must be a live handle from a `bn_pattern_*` constructor.
 */
enum BnStatus bn_pattern_gain(const struct BnPattern *pattern, double theta, double *out);

/**
 * Numeric total-radiated-power integral (1 for every valid pattern).
 *
 * # Safety
 * `pattern` must be a live handle.
 */
enum BnStatus bn_pattern_trp(const struct BnPattern *pattern, double *out);

/**
 * # Safety
 * `pattern` must come from a `bn_pattern_*` constructor and not already be
 * freed; null is ignored.
 */
void bn_pattern_free(struct BnPattern *pattern);

/**
 * Perfect orientation (no error).
 *
 * # Safety
 * `out` must be valid; release the handle with [`bn_error_model_free`].
 */
enum BnStatus bn_error_zero(struct BnErrorModel **out);

/**
 * Uniform absolute error on `[0, eps_max]`, `eps_max` in `(0, pi]`.
 *
 * # Safety
 * See [`bn_error_zero`].
 */
enum BnStatus bn_error_uniform(double eps_max, struct BnErrorModel **out);

/**
 * Exponential error with pre-truncation `mean`, truncated to `[0, pi]`.
 *
 * # Safety
 * See [`bn_error_zero`].
 */
enum BnStatus bn_error_truncated_exponential(double mean, struct BnErrorModel **out);

/**
 * Half-normal error with pre-truncation `mean`, truncated to `[0, pi]`.
 *
 * # Safety
 * See [`bn_error_zero`].
 */
enum BnStatus bn_error_truncated_half_normal(double mean, struct BnErrorModel **out);

/**
 * Piecewise-exponential cdf with a dimple at `(a, b)` on `[0, pi]`.
 *
 * # Safety
 * See [`bn_error_zero`].
 */
enum BnStatus bn_error_dimple(double a, double b, double c1, double c2, struct BnErrorModel **out);

/**
 * Cdf of the absolute error at `x` in `[0, pi]`.
 *
 * # Safety
 * `model` must be a live handle.
 */
enum BnStatus bn_error_cdf(const struct BnErrorModel *model, double x, double *out);

/**
 * Density of the absolute error at `x` in `[0, pi]`.
 *
 * # Safety
 * `model` must be a live handle.
 */
enum BnStatus bn_error_pdf(const struct BnErrorModel *model, double x, double *out);

/**
 * Least `x` with `F(x) >= q`, for `q` in `[0, 1]`.
 *
 * # Safety
 * `model` must be a live handle.
 */
enum BnStatus bn_error_quantile(const struct BnErrorModel *model, double q, double *out);

/**
 * Concavity diagnostic: `is_concave` gets 1/0, `worst_slope` the largest
 * positive density slope found on the grid.
 *
 * # Safety
 * `model` must be a live handle; out-pointers must be valid.
 */
enum BnStatus bn_error_is_concave_cdf(const struct BnErrorModel *model,
                                      int32_t *is_concave,
                                      double *worst_slope);

/**
 * # Safety
 * `model` must come from a `bn_error_*` constructor and not already be
 * freed; null is ignored.
 */
void bn_error_model_free(struct BnErrorModel *model);

/**
 * Network parameters: intensity `lambda` (per m^2), pair distance `d` (m),
 * pathloss exponent `alpha` (> 2), SINR threshold `beta` (linear), noise
 * power `eta` (W), transmit power `p_t` (W).
 *
 * # Safety
 * `out` must be valid; release the handle with [`bn_params_free`].
 */
enum BnStatus bn_params_new(double lambda,
                            double d,
                            double alpha,
                            double beta,
                            double eta,
                            double p_t,
                            struct BnParams **out);

/**
 * # Safety
 * `params` must come from [`bn_params_new`] and not already be freed; null
 * is ignored.
 */
void bn_params_free(struct BnParams *params);

/**
 * Success probability of the typical transmission for any pattern/error
 * combination (closed form where available, quadrature otherwise).
 *
 * # Safety
 * All handles must be live; `out` must be valid.
 */
enum BnStatus bn_success_probability(const struct BnParams *params,
                                     const struct BnPattern *pattern,
                                     const struct BnErrorModel *error,
                                     double *out);

/**
 * Closed-form success probability with omni antennas.
 *
 * # Safety
 * `params` must be live; `out` valid.
 */
enum BnStatus bn_success_omni(const struct BnParams *params, double *out);

/**
 * Closed-form spatial throughput with omni antennas.
 *
 * # Safety
 * `params` must be live; `out` valid.
 */
enum BnStatus bn_tp_omni(const struct BnParams *params, struct BnThroughput *out);

/**
 * Closed-form spatial throughput for an ideal sector without sidelobes.
 *
 * # Safety
 * Handles must be live; `out` valid.
 */
enum BnStatus bn_tp_sector_noside(const struct BnParams *params,
                                  double omega,
                                  const struct BnErrorModel *error,
                                  struct BnThroughput *out);

/**
 * Numeric spatial throughput for any pattern (maximizes `lambda p_s`).
 *
 * # Safety
 * Handles must be live; `out` valid.
 */
enum BnStatus bn_tp_numeric(const struct BnParams *params,
                            const struct BnPattern *pattern,
                            const struct BnErrorModel *error,
                            struct BnThroughput *out);

/**
 * Closed-form transmission capacity with omni antennas at outage `p_e`.
 *
 * # Safety
 * `params` must be live; `out` valid.
 */
enum BnStatus bn_tc_omni(const struct BnParams *params, double p_e, struct BnThroughput *out);

/**
 * Closed-form transmission capacity for an ideal sector without sidelobes.
 * Infeasible configurations return `feasible = 0` with zero value.
 *
 * # Safety
 * Handles must be live; `out` valid.
 */
enum BnStatus bn_tc_sector_noside(const struct BnParams *params,
                                  double omega,
                                  const struct BnErrorModel *error,
                                  double p_e,
                                  struct BnThroughput *out);

/**
 * Numeric transmission capacity for any pattern (inverts the success curve).
 *
 * # Safety
 * Handles must be live; `out` valid.
 */
enum BnStatus bn_tc_numeric(const struct BnParams *params,
                            const struct BnPattern *pattern,
                            const struct BnErrorModel *error,
                            double p_e,
                            struct BnThroughput *out);

/**
 * TC-maximizing beamwidth for an ideal sector without sidelobes; depends
 * only on the error model and the outage constraint.
 *
 * # Safety
 * `error` must be live; `out` valid.
 */
enum BnStatus bn_tc_beamwidth_maximizer(const struct BnErrorModel *error,
                                        double p_e,
                                        struct BnMaximizer *out);

/**
 * Seeded Monte Carlo estimate of the typical-pair success probability on a
 * torus window of side `window` meters with `replications` samples.
 * Deterministic for a fixed seed.
 *
 * # Safety
 * Handles must be live; `out` valid.
 */
enum BnStatus bn_simulate_success(const struct BnParams *params,
                                  const struct BnPattern *pattern,
                                  const struct BnErrorModel *error,
                                  double window,
                                  uint64_t replications,
                                  uint64_t seed,
                                  struct BnSimEstimate *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BEAMNET_H */
