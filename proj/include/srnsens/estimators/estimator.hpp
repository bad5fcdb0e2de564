#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "srnsens/estimators/request.hpp"
#include "srnsens/estimators/samplers.hpp"

namespace srn {

/// A ready-to-sample estimator for one request. Construction performs PPA
/// calibration and the Girsanov usability check; sample(i) is then a pure
/// function of the request seed and the index i, safe to call concurrently.
class Estimator {
 public:
  explicit Estimator(SensitivityRequest request);

  const SensitivityProblem& problem() const noexcept { return problem_; }
  Method method() const noexcept { return problem_.request().method; }
  const std::optional<PpaCalibration>& calibration() const noexcept { return calibration_; }

  /// Sample number `index`, drawn from RNG stream `index` of the request seed.
  SampleValue sample(std::uint64_t index) const;

 private:
  SensitivityProblem problem_;
  std::optional<PpaCalibration> calibration_;
};

/// Fills out[j] = est.sample(first + j) on the calling thread.
void generate_samples_serial(const Estimator& est, std::uint64_t first, std::span<SampleValue> out);

/// OpenMP version of generate_samples_serial; identical output for any
/// thread count. threads <= 0 uses the OpenMP default.
void generate_samples_parallel(const Estimator& est, std::uint64_t first, std::span<SampleValue> out,
                               int threads = 0);

}  // namespace srn
