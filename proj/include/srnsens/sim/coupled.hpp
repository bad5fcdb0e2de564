#pragma once

#include <cstdint>
#include <utility>

#include "srnsens/model/network.hpp"
#include "srnsens/sim/kinetics.hpp"
#include "srnsens/sim/rng.hpp"
#include "srnsens/sim/ssa.hpp"

namespace srn {

struct CoupledPair {
  State z1;
  State z2;
  std::uint64_t steps = 0;
};

/// Simulates (Z1, Z2) up to Tf under the split-clock coupling: channel k has
/// a shared clock at rate min(l1_k(Z1), l2_k(Z2)) that moves both copies, and
/// two residual clocks that move only Z1 or only Z2. Each clock keeps an
/// internal time and a unit-exponential firing target.
///
/// When `kin1` and `kin2` are the same object, the pair stops as soon as it
/// merges: from then on every residual rate is 0 and the copies stay equal.
CoupledPair simulate_split_clock(const Kinetics& kin1, const Kinetics& kin2, State z1, State z2, double Tf,
                                 RngStream& rng, std::uint64_t step_cap = kDefaultStepCap);

/// f(Z1(Tf)) - f(Z2(Tf)) for the split-clock pair started at (x1, x2) with a
/// common parameter vector.
double evaluate_coupled_difference(const Kinetics& kin, State x1, State x2, double Tf, const OutputFunction& f,
                                   RngStream& rng, std::uint64_t step_cap = kDefaultStepCap);

/// Simulates X under `kin1` and under `kin2` from the same x0, both driven by
/// one shared family of unit-rate Poisson processes (one per channel).
CoupledPair simulate_common_paths(const Kinetics& kin1, const Kinetics& kin2, const State& x0, double T,
                                  RngStream& rng, std::uint64_t step_cap = kDefaultStepCap);

}  // namespace srn
