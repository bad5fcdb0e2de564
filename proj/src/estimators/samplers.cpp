#include "srnsens/estimators/samplers.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include "srnsens/error.hpp"
#include "srnsens/sim/coupled.hpp"
#include "srnsens/sim/poisson.hpp"
#include "srnsens/sim/ssa.hpp"

namespace srn {

double estimate_r_total(const SensitivityProblem& problem, int n0, RngStream& rng) {
  if (n0 < 1) throw ValidationError("N0 must be at least 1");
  const Kinetics& kin = problem.kinetics();
  const double T = problem.T();
  std::vector<double> rates(kin.reaction_count());
  double total = 0.0;
  for (int i = 0; i < n0; ++i) {
    State x = problem.x0();
    double t = 0.0;
    std::uint64_t steps = 0;
    // The state at time 0 always contributes, also when T = 0.
    while (true) {
      const JumpEvent ev = ssa_step(kin, x, rng, rates);
      if (ev.is_absorbing()) break;
      const double a0 = std::accumulate(rates.begin(), rates.end(), 0.0);
      for (std::size_t k : problem.sensitive_reactions()) total += std::fabs(problem.derivative(k, x)) / a0;
      t += ev.dt();
      if (t >= T) break;
      apply_stoich(x, kin.stoich(ev.reaction()));
      check_step_cap(++steps, problem.step_cap());
    }
  }
  return total / n0;
}

PpaCalibration calibrate_ppa(const SensitivityProblem& problem) {
  const auto& req = problem.request();
  RngStream rng(req.seed, kCalibrationStream);
  PpaCalibration cal;
  cal.n0 = req.n0;
  cal.m0 = req.m0;
  cal.r_tot_estimate = estimate_r_total(problem, req.n0, rng);
  cal.c = cal.r_tot_estimate > 0.0 ? req.m0 / cal.r_tot_estimate : static_cast<double>(req.m0);
  if (!std::isfinite(cal.c) || !(cal.c > 0.0)) throw DomainError("PPA normalization constant is not finite");
  return cal;
}

SampleValue ppa_sample(const SensitivityProblem& problem, const PpaCalibration& calibration, RngStream& rng) {
  if (!(calibration.c > 0.0)) throw ValidationError("PPA normalization constant must be positive");
  const Kinetics& kin = problem.kinetics();
  const OutputFunction& f = problem.f();
  const double T = problem.T();
  const double c = calibration.c;
  const std::uint64_t cap = problem.step_cap();
  std::vector<double> rates(kin.reaction_count());
  SampleValue out;
  State x = problem.x0();
  State shifted;
  double t = 0.0;
  double s = 0.0;
  while (t < T) {
    const JumpEvent ev = ssa_step(kin, x, rng, rates);
    const double dt = std::min(ev.dt(), T - t);
    const double a0 = ev.is_absorbing() ? 0.0 : std::accumulate(rates.begin(), rates.end(), 0.0);
    const double gamma = a0 > 0.0 ? rng.exponential(a0) : 0.0;
    const double fx = f(x);
    for (std::size_t k : problem.sensitive_reactions()) {
      const double d = problem.derivative(k, x);
      if (d == 0.0) continue;
      shifted = x;
      apply_stoich(shifted, kin.stoich(k));
      if (a0 == 0.0) {
        s += d * (evaluate_integral(kin, shifted, T - t, f, rng, cap) - (T - t) * fx);
        ++out.aux_paths_used;
        continue;
      }
      const std::int64_t n = generate_poisson(std::fabs(d) * c / a0, rng);
      if (gamma < T - t) {
        s += d * (f(shifted) - fx) * (dt - 1.0 / a0);
        if (n > 0) {
          const double beta = d > 0.0 ? 1.0 : -1.0;
          s += beta * static_cast<double>(n) / c *
               evaluate_coupled_difference(kin, shifted, x, T - t - gamma, f, rng, cap);
          ++out.aux_paths_used;
        }
      } else {
        s += d * (f(shifted) - fx) * dt;
      }
    }
    t += dt;
    if (ev.is_absorbing() || t >= T) break;
    apply_stoich(x, kin.stoich(ev.reaction()));
    check_step_cap(++out.jumps, cap);
  }
  out.value = s;
  return out;
}

void check_girsanov_usable(const SensitivityProblem& problem) {
  if (problem.theta() != 0.0) return;
  const std::size_t p = problem.param_index();
  for (std::size_t k : problem.sensitive_reactions()) {
    const Expr& e = problem.request().network.reaction(k).propensity;
    if (e.op() == Op::MassAction && e.rate().op() == Op::Param && e.rate().index() == p)
      throw MethodUnusable("girsanov cannot estimate the sensitivity at " + problem.request().param +
                           " = 0: reaction '" + problem.request().network.reaction(k).name +
                           "' has rate constant 0 and never fires");
  }
}

SampleValue girsanov_sample(const SensitivityProblem& problem, RngStream& rng) {
  const Kinetics& kin = problem.kinetics();
  const double T = problem.T();
  std::vector<double> rates(kin.reaction_count());
  std::vector<double> dl(kin.reaction_count());
  SampleValue out;
  State x = problem.x0();
  double t = 0.0;
  double score = 0.0;
  while (t < T) {
    const JumpEvent ev = ssa_step(kin, x, rng, rates);
    const double dt = std::min(ev.dt(), T - t);
    for (std::size_t k : problem.sensitive_reactions()) {
      dl[k] = problem.derivative(k, x);
      if (rates[k] == 0.0 && dl[k] != 0.0)
        throw MethodUnusable("girsanov weight undefined: reaction '" + problem.request().network.reaction(k).name +
                             "' has zero propensity but non-zero derivative at " + problem.request().param +
                             " = " + std::to_string(problem.theta()));
      score -= dl[k] * dt;
    }
    t += dt;
    if (ev.is_absorbing() || t >= T) break;
    const std::size_t k0 = ev.reaction();
    if (!problem.derivative_expr(k0).is_zero()) score += dl[k0] / rates[k0];
    apply_stoich(x, kin.stoich(k0));
    check_step_cap(++out.jumps, problem.step_cap());
  }
  out.value = problem.f()(x) * score;
  return out;
}

SampleValue crp_sample(const SensitivityProblem& problem, RngStream& rng) {
  const CoupledPair pair =
      simulate_common_paths(problem.kinetics(), problem.perturbed_kinetics(), problem.x0(), problem.T(), rng,
                            problem.step_cap());
  const double h = *problem.request().h;
  return {(problem.f()(pair.z2) - problem.f()(pair.z1)) / h, pair.steps, 0};
}

SampleValue cfd_sample(const SensitivityProblem& problem, RngStream& rng) {
  const CoupledPair pair = simulate_split_clock(problem.perturbed_kinetics(), problem.kinetics(), problem.x0(),
                                                problem.x0(), problem.T(), rng, problem.step_cap());
  const double h = *problem.request().h;
  return {(problem.f()(pair.z1) - problem.f()(pair.z2)) / h, pair.steps, 0};
}

}  // namespace srn
