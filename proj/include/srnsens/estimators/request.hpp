#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "srnsens/model/network.hpp"
#include "srnsens/sim/kinetics.hpp"
#include "srnsens/sim/ssa.hpp"

namespace srn {

enum class Method { Ppa, Girsanov, Crp, Cfd };

std::string_view method_name(Method m);
/// Accepts ppa, girsanov, crp, cfd (case-sensitive).
std::optional<Method> parse_method(std::string_view name);
inline bool is_finite_difference(Method m) { return m == Method::Crp || m == Method::Cfd; }

/// Everything needed to estimate dE[f(X(T))]/d(theta) for one parameter.
/// The network carries the parameter values and the initial state x0.
struct SensitivityRequest {
  ReactionNetwork network;
  std::string param;
  OutputFunction f;
  double T = 0.0;
  Method method = Method::Ppa;
  /// Finite-difference step, required for crp/cfd and rejected otherwise.
  std::optional<double> h{};
  int n0 = 100;
  int m0 = 10;
  std::uint64_t seed = 0;
  std::uint64_t step_cap = kDefaultStepCap;
};

/// A validated request with the propensity derivatives compiled.
class SensitivityProblem {
 public:
  explicit SensitivityProblem(SensitivityRequest request);

  const SensitivityRequest& request() const noexcept { return request_; }
  const Kinetics& kinetics() const noexcept { return kinetics_; }
  /// Kinetics at theta + h (finite-difference methods only).
  const Kinetics& perturbed_kinetics() const;
  const OutputFunction& f() const noexcept { return request_.f; }
  const State& x0() const noexcept { return request_.network.initial_state(); }
  double T() const noexcept { return request_.T; }
  double theta() const noexcept { return kinetics_.params()[param_index_]; }
  std::size_t param_index() const noexcept { return param_index_; }
  std::uint64_t step_cap() const noexcept { return request_.step_cap; }

  /// Reactions whose propensity depends on theta.
  const std::vector<std::size_t>& sensitive_reactions() const noexcept { return sensitive_; }
  /// Symbolic d(lambda_k)/d(theta).
  const Expr& derivative_expr(std::size_t k) const { return derivative_exprs_[k]; }
  /// d(lambda_k)/d(theta) at x.
  double derivative(std::size_t k, std::span<const Count> x) const;

 private:
  SensitivityRequest request_;
  Kinetics kinetics_;
  std::optional<Kinetics> perturbed_;
  std::size_t param_index_;
  std::vector<Expr> derivative_exprs_;
  std::vector<CompiledExpr> derivatives_;
  std::vector<std::size_t> sensitive_;
};

}  // namespace srn
