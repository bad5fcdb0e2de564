#include "srnsens/oracle/ctmc.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "srnsens/error.hpp"
#include "srnsens/oracle/affine.hpp"

namespace srn {

namespace {

constexpr double kPoissonTail = 1e-15;

}  // namespace

TruncatedCtmc::TruncatedCtmc(const ReactionNetwork& network, std::vector<Count> caps) : caps_(std::move(caps)) {
  const std::size_t d = network.species_count();
  if (caps_.size() != d) throw ValidationError("truncation needs one cap per species");
  strides_.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    if (caps_[i] < 0) throw ValidationError("truncation caps must be non-negative");
    strides_[i] = states_;
    const auto width = static_cast<std::size_t>(caps_[i]) + 1;
    if (states_ > kMaxTruncatedStates / width)
      throw TruncationError("truncated state space exceeds " + std::to_string(kMaxTruncatedStates) + " states");
    states_ *= width;
  }
  const auto& params = network.param_values();
  row_start_.reserve(states_ + 1);
  exit_rate_.resize(states_);
  State x(d);
  State y(d);
  for (std::size_t s = 0; s < states_; ++s) {
    row_start_.push_back(transitions_.size());
    x = state(s);
    double out = 0.0;
    for (std::size_t k = 0; k < network.reaction_count(); ++k) {
      const double rate = network.propensity(k, x, params);
      if (rate <= 0.0) continue;
      y = x;
      apply_stoich(y, network.reaction(k).stoich);
      if (y == x) continue;
      transitions_.push_back({contains(y) ? index(y) : states_, rate});
      out += rate;
    }
    exit_rate_[s] = out;
    max_exit_ = std::max(max_exit_, out);
  }
  row_start_.push_back(transitions_.size());
}

bool TruncatedCtmc::contains(const State& x) const {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] < 0 || x[i] > caps_[i]) return false;
  return true;
}

std::size_t TruncatedCtmc::index(const State& x) const {
  std::size_t s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += static_cast<std::size_t>(x[i]) * strides_[i];
  return s;
}

State TruncatedCtmc::state(std::size_t s) const {
  State x(caps_.size());
  for (std::size_t i = 0; i < caps_.size(); ++i) {
    const auto width = static_cast<std::size_t>(caps_[i]) + 1;
    x[i] = static_cast<Count>(s % width);
    s /= width;
  }
  return x;
}

std::vector<double> TruncatedCtmc::transient(const State& x0, double t, double& leaked) const {
  if (!contains(x0)) throw TruncationError("start state lies outside the truncation box");
  std::vector<double> v(states_, 0.0);
  v[index(x0)] = 1.0;
  const double q = max_exit_;
  const double qt = q * t;
  if (t == 0.0 || q == 0.0) {
    leaked = 0.0;
    return v;
  }
  // result = sum_n Poisson(n; qt) v P^n with P = I + Q/q.
  std::vector<double> result(states_, 0.0);
  std::vector<double> next(states_);
  double weight_sum = 0.0;
  const auto mode = static_cast<double>(std::floor(qt));
  const double max_n = qt + 10.0 * std::sqrt(qt) + 50.0;
  for (double n = 0.0;; n += 1.0) {
    const double w = std::exp(-qt + n * std::log(qt) - std::lgamma(n + 1.0));
    if (w > 0.0) {
      for (std::size_t s = 0; s < states_; ++s) result[s] += w * v[s];
      weight_sum += w;
    }
    if (n > mode && (1.0 - weight_sum < kPoissonTail || n > max_n)) break;
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t s = 0; s < states_; ++s) {
      const double mass = v[s];
      if (mass == 0.0) continue;
      next[s] += mass * (1.0 - exit_rate_[s] / q);
      for (std::size_t e = row_start_[s]; e < row_start_[s + 1]; ++e)
        if (transitions_[e].target != states_) next[transitions_[e].target] += mass * transitions_[e].rate / q;
    }
    v.swap(next);
  }
  double kept = 0.0;
  for (double p : result) kept += p;
  leaked = std::max(0.0, weight_sum - kept);
  return result;
}

PsiResult brute_force_psi(const ReactionNetwork& network, const State& x, const OutputFunction& f, double t,
                          const std::vector<Count>& caps, double leak_tolerance) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw ValidationError("time must be finite and non-negative");
  if (t == 0.0) return {f(x), 0.0, 0.0};
  const TruncatedCtmc ctmc(network, caps);
  double leaked = 0.0;
  const std::vector<double> p = ctmc.transient(x, t, leaked);
  PsiResult out;
  double max_f = 0.0;
  for (std::size_t s = 0; s < p.size(); ++s) {
    const double fs = f(ctmc.state(s));
    out.value += p[s] * fs;
    max_f = std::max(max_f, std::abs(fs));
  }
  out.leaked = leaked;
  out.error_bound = leaked * max_f;
  if (leaked > leak_tolerance)
    throw TruncationError("truncation leaked " + std::to_string(leaked) + " probability mass (tolerance " +
                          std::to_string(leak_tolerance) + "); raise the caps");
  return out;
}

double brute_force_d_theta(const ReactionNetwork& network, const State& x, const OutputFunction& f, double t,
                           std::size_t k, const std::vector<Count>& caps, double leak_tolerance) {
  if (k >= network.reaction_count()) throw ValidationError("reaction index out of range");
  State shifted = x;
  apply_stoich(shifted, network.reaction(k).stoich);
  if (shifted == x) return 0.0;
  return brute_force_psi(network, shifted, f, t, caps, leak_tolerance).value -
         brute_force_psi(network, x, f, t, caps, leak_tolerance).value;
}

std::vector<Count> default_caps(const ReactionNetwork& network, const std::vector<State>& starts, double t) {
  std::vector<Count> caps(network.species_count(), 50);
  for (const auto& x0 : starts) {
    const AffineMoments m = affine_moments(network, x0, t);
    for (std::size_t i = 0; i < caps.size(); ++i) {
      const double sd = std::sqrt(std::max(0.0, m.covariance[i][i]));
      const double hi = std::max(m.mean[i], static_cast<double>(x0[i])) + 12.0 * sd;
      caps[i] = std::max(caps[i], static_cast<Count>(std::ceil(hi)));
    }
  }
  return caps;
}

}  // namespace srn
