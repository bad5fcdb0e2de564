#include "srnsens/sim/ssa.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "srnsens/error.hpp"

namespace srn {

void check_step_cap(std::uint64_t steps, std::uint64_t cap) {
  if (steps > cap) throw StepLimitExceeded("path exceeded " + std::to_string(cap) + " reaction events");
}

JumpEvent ssa_select(std::span<const double> rates, double a0, RngStream& rng) {
  const double r1 = rng.uniform();
  const double r2 = rng.uniform();
  if (!(a0 > 0.0)) return JumpEvent::absorbing();
  const double dt = -std::log(r1) / a0;
  const double target = r2 * a0;
  double cumulative = 0.0;
  std::size_t last_active = 0;
  for (std::size_t k = 0; k < rates.size(); ++k) {
    if (rates[k] <= 0.0) continue;
    cumulative += rates[k];
    last_active = k;
    if (cumulative >= target) return JumpEvent::fire(dt, k);
  }
  // Rounding left the cumulative sum just short of r2 * a0.
  return JumpEvent::fire(dt, last_active);
}

JumpEvent ssa_step(const Kinetics& kin, std::span<const Count> x, RngStream& rng, std::span<double> scratch) {
  const double a0 = kin.rates(x, scratch);
  return ssa_select(scratch, a0, rng);
}

JumpEvent ssa_step(const Kinetics& kin, std::span<const Count> x, RngStream& rng) {
  std::vector<double> scratch(kin.reaction_count());
  return ssa_step(kin, x, rng, scratch);
}

State simulate_terminal(const Kinetics& kin, State x, double T, RngStream& rng, std::uint64_t step_cap) {
  if (!(T >= 0.0)) throw ValidationError("horizon T must be non-negative");
  std::vector<double> rates(kin.reaction_count());
  double t = 0.0;
  std::uint64_t steps = 0;
  while (true) {
    const JumpEvent ev = ssa_step(kin, x, rng, rates);
    if (ev.is_absorbing() || t + ev.dt() >= T) return x;
    t += ev.dt();
    apply_stoich(x, kin.stoich(ev.reaction()));
    check_step_cap(++steps, step_cap);
  }
}

double evaluate_integral(const Kinetics& kin, State x, double Tf, const OutputFunction& f, RngStream& rng,
                         std::uint64_t step_cap) {
  if (!(Tf >= 0.0)) throw ValidationError("horizon must be non-negative");
  if (Tf == 0.0) return 0.0;
  std::vector<double> rates(kin.reaction_count());
  double t = 0.0;
  double integral = 0.0;
  std::uint64_t steps = 0;
  while (true) {
    const JumpEvent ev = ssa_step(kin, x, rng, rates);
    const double fx = f(x);
    if (ev.is_absorbing() || t + ev.dt() >= Tf) return integral + fx * (Tf - t);
    integral += fx * ev.dt();
    t += ev.dt();
    apply_stoich(x, kin.stoich(ev.reaction()));
    check_step_cap(++steps, step_cap);
  }
}

}  // namespace srn
