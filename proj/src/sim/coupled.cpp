#include "srnsens/sim/coupled.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "srnsens/error.hpp"

namespace srn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Lazily extended arrival times of a unit-rate Poisson process.
class UnitProcess {
 public:
  double arrival(std::size_t n, RngStream& rng) {
    while (points_.size() <= n) points_.push_back((points_.empty() ? 0.0 : points_.back()) + rng.exponential());
    return points_[n];
  }

 private:
  std::vector<double> points_;
};

void run_common_path(const Kinetics& kin, State& x, double T, std::vector<UnitProcess>& processes, RngStream& rng,
                     std::uint64_t step_cap, std::uint64_t& steps) {
  const std::size_t K = kin.reaction_count();
  std::vector<double> internal(K, 0.0);
  std::vector<std::size_t> fired(K, 0);
  std::vector<double> rates(K);
  double t = 0.0;
  while (true) {
    kin.rates(x, rates);
    double best = kInf;
    std::size_t km = 0;
    for (std::size_t k = 0; k < K; ++k) {
      if (rates[k] <= 0.0) continue;
      const double dt = (processes[k].arrival(fired[k], rng) - internal[k]) / rates[k];
      if (dt < best) {
        best = dt;
        km = k;
      }
    }
    if (best == kInf || t + best >= T) return;
    t += best;
    for (std::size_t k = 0; k < K; ++k) internal[k] += rates[k] * best;
    ++fired[km];
    apply_stoich(x, kin.stoich(km));
    check_step_cap(++steps, step_cap);
  }
}

}  // namespace

CoupledPair simulate_split_clock(const Kinetics& kin1, const Kinetics& kin2, State z1, State z2, double Tf,
                                 RngStream& rng, std::uint64_t step_cap) {
  if (!(Tf >= 0.0)) throw ValidationError("horizon must be non-negative");
  if (kin1.reaction_count() != kin2.reaction_count()) throw ValidationError("coupled kinetics differ in size");
  const bool merge_stops = &kin1 == &kin2;
  const std::size_t K = kin1.reaction_count();
  CoupledPair out{std::move(z1), std::move(z2), 0};
  if (merge_stops && out.z1 == out.z2) return out;

  // Clock (k, i) lives at index 3k + i; i = 0 shared, 1 Z1-only, 2 Z2-only.
  std::vector<double> internal(3 * K, 0.0);
  std::vector<double> target(3 * K);
  for (auto& p : target) p = rng.exponential();
  std::vector<double> rate(3 * K);
  std::vector<double> l1(K), l2(K);
  double t = 0.0;
  while (t < Tf) {
    if (merge_stops && out.z1 == out.z2) break;
    kin1.rates(out.z1, l1);
    kin2.rates(out.z2, l2);
    double best = kInf;
    std::size_t im = 0;
    for (std::size_t k = 0; k < K; ++k) {
      const double shared = std::min(l1[k], l2[k]);
      rate[3 * k] = shared;
      rate[3 * k + 1] = l1[k] - shared;
      rate[3 * k + 2] = l2[k] - shared;
      for (std::size_t i = 3 * k; i < 3 * k + 3; ++i) {
        if (rate[i] <= 0.0) continue;
        const double dt = (target[i] - internal[i]) / rate[i];
        if (dt < best) {
          best = dt;
          im = i;
        }
      }
    }
    if (best == kInf) break;
    t += best;
    if (t >= Tf) break;
    const std::size_t k = im / 3;
    const std::size_t which = im % 3;
    if (which != 2) apply_stoich(out.z1, kin1.stoich(k));
    if (which != 1) apply_stoich(out.z2, kin2.stoich(k));
    for (std::size_t i = 0; i < 3 * K; ++i) internal[i] += rate[i] * best;
    target[im] += rng.exponential();
    check_step_cap(++out.steps, step_cap);
  }
  return out;
}

double evaluate_coupled_difference(const Kinetics& kin, State x1, State x2, double Tf, const OutputFunction& f,
                                   RngStream& rng, std::uint64_t step_cap) {
  const CoupledPair pair = simulate_split_clock(kin, kin, std::move(x1), std::move(x2), Tf, rng, step_cap);
  return f(pair.z1) - f(pair.z2);
}

CoupledPair simulate_common_paths(const Kinetics& kin1, const Kinetics& kin2, const State& x0, double T,
                                  RngStream& rng, std::uint64_t step_cap) {
  if (!(T >= 0.0)) throw ValidationError("horizon T must be non-negative");
  if (kin1.reaction_count() != kin2.reaction_count()) throw ValidationError("coupled kinetics differ in size");
  std::vector<UnitProcess> processes(kin1.reaction_count());
  CoupledPair out{x0, x0, 0};
  run_common_path(kin1, out.z1, T, processes, rng, step_cap, out.steps);
  run_common_path(kin2, out.z2, T, processes, rng, step_cap, out.steps);
  return out;
}

}  // namespace srn
