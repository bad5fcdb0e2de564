#include "srnsens/estimators/request.hpp"

#include <cmath>

#include "srnsens/error.hpp"

namespace srn {

std::string_view method_name(Method m) {
  switch (m) {
    case Method::Ppa: return "ppa";
    case Method::Girsanov: return "girsanov";
    case Method::Crp: return "crp";
    case Method::Cfd: return "cfd";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : {Method::Ppa, Method::Girsanov, Method::Crp, Method::Cfd})
    if (method_name(m) == name) return m;
  return std::nullopt;
}

namespace {

const SensitivityRequest& validated(const SensitivityRequest& r) {
  if (!(r.T >= 0.0) || !std::isfinite(r.T)) throw ValidationError("horizon T must be finite and non-negative");
  r.network.param_index(r.param);
  if (is_finite_difference(r.method)) {
    if (!r.h) throw ValidationError(std::string(method_name(r.method)) + " needs a finite-difference step h");
    if (!(*r.h > 0.0) || !std::isfinite(*r.h)) throw ValidationError("finite-difference step h must be positive");
  } else if (r.h) {
    throw ValidationError("h applies only to the crp and cfd methods");
  }
  if (r.n0 < 1) throw ValidationError("N0 must be at least 1");
  if (r.m0 < 1) throw ValidationError("M0 must be at least 1");
  return r;
}

}  // namespace

SensitivityProblem::SensitivityProblem(SensitivityRequest request)
    : request_(validated(request)),
      kinetics_(request_.network),
      param_index_(request_.network.param_index(request_.param)) {
  if (request_.h) {
    auto params = request_.network.param_values();
    params[param_index_] += *request_.h;
    perturbed_.emplace(request_.network, std::move(params));
  }
  const std::size_t K = request_.network.reaction_count();
  derivative_exprs_.reserve(K);
  derivatives_.reserve(K);
  for (std::size_t k = 0; k < K; ++k) {
    derivative_exprs_.push_back(request_.network.reaction(k).propensity.derivative(param_index_));
    derivatives_.emplace_back(derivative_exprs_.back());
    if (!derivative_exprs_.back().is_zero()) sensitive_.push_back(k);
  }
}

const Kinetics& SensitivityProblem::perturbed_kinetics() const {
  if (!perturbed_) throw ValidationError("request has no finite-difference step");
  return *perturbed_;
}

double SensitivityProblem::derivative(std::size_t k, std::span<const Count> x) const {
  const double v = derivatives_[k](x, kinetics_.params());
  if (!std::isfinite(v)) throw DomainError("non-finite propensity derivative");
  return v;
}

}  // namespace srn
