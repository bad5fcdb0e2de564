#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace srn {

/// Deterministic uniform stream identified by (master seed, stream index).
///
/// Sample i of an estimate draws from stream i, so results do not depend on
/// how samples are distributed over threads.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream);

  /// Uniform on the open interval (0, 1); an exact 0 is redrawn.
  double uniform() {
    double u;
    do {
      u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    } while (u == 0.0);
    return u;
  }

  /// Exponential variate with the given rate (rate > 0).
  double exponential(double rate = 1.0) { return -std::log(uniform()) / rate; }

  result_type operator()() { return engine_(); }
  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }

 private:
  std::mt19937_64 engine_;
};

/// Stream index reserved for PPA calibration runs.
inline constexpr std::uint64_t kCalibrationStream = std::numeric_limits<std::uint64_t>::max();

}  // namespace srn
