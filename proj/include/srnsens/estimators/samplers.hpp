#pragma once

#include <cstdint>

#include "srnsens/estimators/request.hpp"
#include "srnsens/sim/rng.hpp"

namespace srn {

/// One realization of a sensitivity estimator.
struct SampleValue {
  double value = 0.0;
  /// Reaction events on the main path (both paths for crp/cfd).
  std::uint64_t jumps = 0;
  /// Auxiliary coupled pairs and integral paths simulated (PPA only).
  std::uint64_t aux_paths_used = 0;
};

/// PPA normalization: c = M0 / E[R_tot], E[R_tot] estimated from N0 paths.
struct PpaCalibration {
  double c = 1.0;
  int m0 = 10;
  int n0 = 100;
  double r_tot_estimate = 0.0;
};

/// N0-path mean of R_tot, the sum over the non-absorbing states the path
/// holds before T (x0 always included) of
/// sum_k |d(lambda_k)/d(theta)| / lambda_0.
double estimate_r_total(const SensitivityProblem& problem, int n0, RngStream& rng);

/// Runs estimate_r_total on the reserved calibration stream of the request
/// seed. When the estimate is 0 no derivative was seen on the pilot paths;
/// c is then set to M0, which keeps the estimator unbiased.
PpaCalibration calibrate_ppa(const SensitivityProblem& problem);

SampleValue ppa_sample(const SensitivityProblem& problem, const PpaCalibration& calibration, RngStream& rng);

/// Throws MethodUnusable when the likelihood-ratio weight is undefined from
/// the start: theta = 0 and some propensity is a mass-action term with rate
/// constant theta.
void check_girsanov_usable(const SensitivityProblem& problem);

/// f(X(T)) times the score sum_k (sum over firings of d(lambda_k)/lambda_k
/// minus the integral of d(lambda_k) over [0, T]). Throws MethodUnusable
/// when the path visits a state with lambda_k = 0 but d(lambda_k) != 0.
SampleValue girsanov_sample(const SensitivityProblem& problem, RngStream& rng);

/// (f(X_{theta+h}(T)) - f(X_theta(T))) / h with both paths driven by common
/// unit-rate Poisson processes.
SampleValue crp_sample(const SensitivityProblem& problem, RngStream& rng);

/// Same difference quotient under the split-clock coupling.
SampleValue cfd_sample(const SensitivityProblem& problem, RngStream& rng);

}  // namespace srn
