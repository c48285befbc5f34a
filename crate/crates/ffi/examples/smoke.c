/* Minimal beamnet C client: build per the workspace README. */
#define _USE_MATH_DEFINES
#include <assert.h>
#include <math.h>
#include <stdio.h>

#include "beamnet.h"

#ifndef M_PI
#define M_PI 3.14159265358979323846
#endif

int main(void) {
  BnParams *params = NULL;
  BnPattern *pattern = NULL;
  BnErrorModel *error = NULL;
  assert(bn_params_new(1e-5, 100.0, 3.0, 4.0, 1e-12, 1.0, &params) == BnOk);
  assert(bn_pattern_ideal_sector(20.0 * M_PI / 180.0, 0.0, &pattern) == BnOk);
  assert(bn_error_truncated_half_normal(3.0 * M_PI / 180.0, &error) == BnOk);

  double ps = 0.0;
  assert(bn_success_probability(params, pattern, error, &ps) == BnOk);
  printf("p_s = %.12f\n", ps);

  BnThroughput tc;
  assert(bn_tc_sector_noside(params, 20.0 * M_PI / 180.0, error, 0.15, &tc) == BnOk);
  printf("TC = %.6e per m^2 (feasible %d)\n", tc.value, tc.feasible);

  BnMaximizer m;
  assert(bn_tc_beamwidth_maximizer(error, 0.15, &m) == BnOk);
  printf("TC-optimal beamwidth = %.6f rad\n", m.omega_star);

  BnSimEstimate est;
  assert(bn_simulate_success(params, pattern, error, 3000.0, 5000, 42, &est) == BnOk);
  printf("simulated p_s = %.5f in [%.5f, %.5f] over %llu replications\n",
         est.p_hat, est.ci_low, est.ci_high, (unsigned long long)est.replications);

  BnPattern *bad = NULL;
  assert(bn_pattern_ideal_sector(-1.0, 0.0, &bad) == BnInvalidArgument);
  printf("expected failure: %s\n", bn_last_error_message());

  bn_error_model_free(error);
  bn_pattern_free(pattern);
  bn_params_free(params);
  puts("ok");
  return 0;
}
