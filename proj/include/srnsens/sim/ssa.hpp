#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>

#include "srnsens/model/network.hpp"
#include "srnsens/sim/kinetics.hpp"
#include "srnsens/sim/rng.hpp"

namespace srn {

/// Default per-path cap on simulated reaction events.
inline constexpr std::uint64_t kDefaultStepCap = 100'000'000;

/// Outcome of one SSA step. An absorbing state yields no reaction and an
/// infinite waiting time.
class JumpEvent {
 public:
  static JumpEvent absorbing() { return JumpEvent(); }
  static JumpEvent fire(double dt, std::size_t reaction) { return JumpEvent(dt, reaction); }

  bool is_absorbing() const noexcept { return !reaction_.has_value(); }
  double dt() const noexcept { return reaction_ ? dt_ : std::numeric_limits<double>::infinity(); }
  std::size_t reaction() const { return reaction_.value(); }

 private:
  JumpEvent() = default;
  JumpEvent(double dt, std::size_t reaction) : dt_(dt), reaction_(reaction) {}

  double dt_ = 0.0;
  std::optional<std::size_t> reaction_;
};

/// Chooses the next reaction given precomputed propensities `rates` with
/// total `a0`. Two uniforms are always consumed.
JumpEvent ssa_select(std::span<const double> rates, double a0, RngStream& rng);

/// One Gillespie step from x. `scratch` must hold K doubles and receives the
/// propensities at x.
JumpEvent ssa_step(const Kinetics& kin, std::span<const Count> x, RngStream& rng, std::span<double> scratch);
JumpEvent ssa_step(const Kinetics& kin, std::span<const Count> x, RngStream& rng);

/// X(T) for a path started at x0.
State simulate_terminal(const Kinetics& kin, State x0, double T, RngStream& rng,
                        std::uint64_t step_cap = kDefaultStepCap);

/// Integral of f(Z(s)) over [0, Tf] along one fresh path started at x.
double evaluate_integral(const Kinetics& kin, State x, double Tf, const OutputFunction& f, RngStream& rng,
                         std::uint64_t step_cap = kDefaultStepCap);

/// Throws StepLimitExceeded once `steps` passes `cap`.
void check_step_cap(std::uint64_t steps, std::uint64_t cap);

}  // namespace srn
