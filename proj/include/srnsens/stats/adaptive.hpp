#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "srnsens/estimators/estimator.hpp"
#include "srnsens/stats/summary.hpp"

namespace srn {

struct AdaptivePolicy {
  double target_p = 0.95;
  std::uint64_t n_max = 10'000'000;
  std::uint64_t initial_batch = 100;
  double growth = 2.0;

  /// Throws ValidationError unless 0 < target_p < 1, growth >= 1 and
  /// n_max >= initial_batch >= 2.
  void validate() const;
};

struct EstimateReport {
  Method method = Method::Ppa;
  std::optional<double> h;
  std::uint64_t seed = 0;
  std::uint64_t n = 0;
  double mean = 0.0;
  double std_dev = 0.0;
  std::optional<double> reference;
  std::optional<double> p;
  /// Set by adaptive runs: whether p reached the target before n_max.
  std::optional<bool> target_met;
  double elapsed_s = 0.0;
  double mean_jumps = 0.0;
  double mean_aux_paths = 0.0;
  std::optional<PpaCalibration> calibration;
};

struct RunOptions {
  /// 0 = OpenMP default; 1 runs the serial reference loop.
  int threads = 0;
};

/// Draws exactly n samples (n >= 2). p is reported when a reference is given.
EstimateReport run_fixed(const SensitivityRequest& request, std::uint64_t n, std::optional<double> reference,
                         const RunOptions& options = {});

/// Draws batches of initial_batch * growth^i samples, recomputing p from the
/// running totals after each one, until p >= target_p or N reaches n_max.
/// Always returns a report; target_met tells which condition stopped it.
EstimateReport run_adaptive(const SensitivityRequest& request, const AdaptivePolicy& policy, double reference,
                            const RunOptions& options = {});

}  // namespace srn
