#include "srnsens/estimators/estimator.hpp"

#include <exception>

#include <omp.h>

namespace srn {

Estimator::Estimator(SensitivityRequest request) : problem_(std::move(request)) {
  switch (problem_.request().method) {
    case Method::Ppa:
      calibration_ = calibrate_ppa(problem_);
      break;
    case Method::Girsanov:
      check_girsanov_usable(problem_);
      break;
    default:
      break;
  }
}

SampleValue Estimator::sample(std::uint64_t index) const {
  RngStream rng(problem_.request().seed, index);
  switch (problem_.request().method) {
    case Method::Ppa: return ppa_sample(problem_, *calibration_, rng);
    case Method::Girsanov: return girsanov_sample(problem_, rng);
    case Method::Crp: return crp_sample(problem_, rng);
    case Method::Cfd: return cfd_sample(problem_, rng);
  }
  return {};
}

void generate_samples_serial(const Estimator& est, std::uint64_t first, std::span<SampleValue> out) {
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = est.sample(first + j);
}

void generate_samples_parallel(const Estimator& est, std::uint64_t first, std::span<SampleValue> out, int threads) {
  const auto n = static_cast<std::int64_t>(out.size());
  if (threads <= 0) threads = omp_get_max_threads();
  std::exception_ptr error;
  std::int64_t error_index = n;
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads)
  for (std::int64_t j = 0; j < n; ++j) {
    try {
      out[j] = est.sample(first + static_cast<std::uint64_t>(j));
    } catch (...) {
#pragma omp critical(srnsens_sample_error)
      if (j < error_index) {
        error_index = j;
        error = std::current_exception();
      }
    }
  }
  // Report the failure a serial run would have hit first.
  if (error) std::rethrow_exception(error);
}

}  // namespace srn
