#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "srnsens/model/network.hpp"

namespace srn {

/// e = constant + sum_j coeff[j] * x_j, with constant and coefficients free of
/// species.
struct AffineForm {
  Expr constant;
  std::vector<Expr> coeff;
};

/// Structural decomposition of e into an affine form over d species; nullopt
/// when some species enters non-linearly.
std::optional<AffineForm> affine_form(const Expr& e, std::size_t d);

using Matrix = std::vector<std::vector<double>>;

/// d E[X]/dt = A E[X] + b for a network with affine propensities, with A and
/// b held symbolically so they can be differentiated in any parameter.
class AffineMomentSystem {
 public:
  /// Throws NonAffineError naming the first non-affine reaction.
  explicit AffineMomentSystem(const ReactionNetwork& network);

  std::size_t dim() const noexcept { return b_.size(); }
  const Expr& a(std::size_t i, std::size_t j) const { return a_[i][j]; }
  const Expr& b(std::size_t i) const { return b_[i]; }
  const std::vector<AffineForm>& propensities() const noexcept { return forms_; }

  Matrix a_values(std::span<const double> params) const;
  std::vector<double> b_values(std::span<const double> params) const;
  /// dA/d(theta_p) and db/d(theta_p).
  Matrix da_values(std::size_t p, std::span<const double> params) const;
  std::vector<double> db_values(std::size_t p, std::span<const double> params) const;

 private:
  std::vector<std::vector<Expr>> a_;
  std::vector<Expr> b_;
  std::vector<AffineForm> forms_;
  std::vector<std::vector<int>> stoich_;
};

/// Mean and covariance of X(t) for an affine network started at x0.
struct AffineMoments {
  std::vector<double> mean;
  Matrix covariance;
};

AffineMoments affine_moments(const ReactionNetwork& network, const State& x0, double t);

/// dE[f(X(T))]/d(theta) for an affine network and linear f, by integrating
/// m' = A m + b together with y' = A y + (dA/dtheta) m + db/dtheta.
/// Throws NonAffineError for non-affine networks or non-linear f.
double exact_sensitivity_affine(const ReactionNetwork& network, std::string_view param, const OutputFunction& f,
                                double T);

}  // namespace srn
