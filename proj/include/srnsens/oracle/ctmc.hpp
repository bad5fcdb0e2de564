#pragma once

#include <cstddef>
#include <vector>

#include "srnsens/model/network.hpp"

namespace srn {

/// Largest state space brute_force_psi will enumerate.
inline constexpr std::size_t kMaxTruncatedStates = 100'000;

/// The generator of a network restricted to the box 0 <= x_i <= caps[i].
/// Transitions leaving the box go to an absorbing sink whose mass is the
/// truncation leak.
class TruncatedCtmc {
 public:
  TruncatedCtmc(const ReactionNetwork& network, std::vector<Count> caps);

  std::size_t size() const noexcept { return states_; }
  const std::vector<Count>& caps() const noexcept { return caps_; }
  bool contains(const State& x) const;
  std::size_t index(const State& x) const;
  State state(std::size_t index) const;

  /// Distribution at time t from the point mass at x0 (uniformization);
  /// `leaked` receives the mass that left the box.
  std::vector<double> transient(const State& x0, double t, double& leaked) const;

 private:
  struct Transition {
    std::size_t target;  // size() means the sink
    double rate;
  };

  std::vector<Count> caps_;
  std::vector<std::size_t> strides_;
  std::size_t states_ = 1;
  std::vector<std::size_t> row_start_;
  std::vector<Transition> transitions_;
  std::vector<double> exit_rate_;
  double max_exit_ = 0.0;
};

struct PsiResult {
  double value = 0.0;
  /// Probability mass that left the truncation box by time t.
  double leaked = 0.0;
  /// leaked * max |f| over the box.
  double error_bound = 0.0;
};

/// E[f(X(t)) | X(0) = x] on the truncated state space. Throws
/// TruncationError when the leaked mass exceeds `leak_tolerance`.
PsiResult brute_force_psi(const ReactionNetwork& network, const State& x, const OutputFunction& f, double t,
                          const std::vector<Count>& caps, double leak_tolerance = 1e-9);

/// Psi(x + zeta_k, f, t) - Psi(x, f, t).
double brute_force_d_theta(const ReactionNetwork& network, const State& x, const OutputFunction& f, double t,
                           std::size_t k, const std::vector<Count>& caps, double leak_tolerance = 1e-9);

/// Per-species caps of mean + 12 standard deviations (at least 50) over the
/// given start states, from the affine moment equations at time t.
std::vector<Count> default_caps(const ReactionNetwork& network, const std::vector<State>& starts, double t);

}  // namespace srn
