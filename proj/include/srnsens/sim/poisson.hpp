#pragma once

#include <cstdint>

#include "srnsens/sim/rng.hpp"

namespace srn {

/// Mean above which generate_poisson switches from inversion to transformed
/// rejection.
inline constexpr double kPoissonInversionLimit = 30.0;

/// Exact Poisson(r) variate. Sequential inversion for r <= 30, Hormann's
/// PTRS transformed rejection above.
std::int64_t generate_poisson(double r, RngStream& rng);

}  // namespace srn
