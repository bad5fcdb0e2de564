#include "srnsens/oracle/affine.hpp"

#include <cmath>

#include <boost/numeric/odeint.hpp>

#include "srnsens/error.hpp"

namespace srn {

namespace {

namespace odeint = boost::numeric::odeint;

constexpr double kAbsTol = 1e-12;
constexpr double kRelTol = 1e-9;

AffineForm pure(const Expr& e, std::size_t d) { return {e, std::vector<Expr>(d)}; }

AffineForm scaled(AffineForm f, const Expr& s) {
  f.constant = f.constant * s;
  for (auto& c : f.coeff) c = c * s;
  return f;
}

AffineForm combined(AffineForm a, const AffineForm& b, double sign) {
  a.constant = sign > 0 ? a.constant + b.constant : a.constant - b.constant;
  for (std::size_t j = 0; j < a.coeff.size(); ++j)
    a.coeff[j] = sign > 0 ? a.coeff[j] + b.coeff[j] : a.coeff[j] - b.coeff[j];
  return a;
}

std::vector<double> evaluate_all(const std::vector<Expr>& v, std::span<const double> params) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& e : v) out.push_back(e.evaluate({}, params));
  return out;
}

std::vector<double> linear_weights(const OutputFunction& f, std::size_t d) {
  auto form = affine_form(f.expr(), d);
  if (!form) throw NonAffineError("output function '" + f.to_string() + "' is not linear in the species counts");
  return evaluate_all(form->coeff, {});
}

}  // namespace

std::optional<AffineForm> affine_form(const Expr& e, std::size_t d) {
  if (!e.depends_on_species()) return pure(e, d);
  switch (e.op()) {
    case Op::Species: {
      AffineForm f = pure(Expr(), d);
      f.coeff[e.index()] = Expr::constant(1.0);
      return f;
    }
    case Op::Neg: {
      auto inner = affine_form(e.lhs(), d);
      if (!inner) return std::nullopt;
      return scaled(*inner, Expr::constant(-1.0));
    }
    case Op::Add:
    case Op::Sub: {
      auto l = affine_form(e.lhs(), d);
      auto r = affine_form(e.rhs(), d);
      if (!l || !r) return std::nullopt;
      return combined(*l, *r, e.op() == Op::Add ? 1.0 : -1.0);
    }
    case Op::Mul: {
      if (!e.lhs().depends_on_species()) {
        auto r = affine_form(e.rhs(), d);
        if (!r) return std::nullopt;
        return scaled(*r, e.lhs());
      }
      if (!e.rhs().depends_on_species()) {
        auto l = affine_form(e.lhs(), d);
        if (!l) return std::nullopt;
        return scaled(*l, e.rhs());
      }
      return std::nullopt;
    }
    case Op::Div: {
      if (e.rhs().depends_on_species()) return std::nullopt;
      auto l = affine_form(e.lhs(), d);
      if (!l) return std::nullopt;
      return scaled(*l, Expr::constant(1.0) / e.rhs());
    }
    case Op::Pow:
      if (e.rhs().is_constant() && e.rhs().value() == 1.0) return affine_form(e.lhs(), d);
      return std::nullopt;
    case Op::MassAction: {
      const auto& reactants = e.reactants();
      if (reactants.size() == 1 && reactants[0].count == 1) {
        AffineForm f = pure(Expr(), d);
        f.coeff[reactants[0].species] = e.rate();
        return f;
      }
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

AffineMomentSystem::AffineMomentSystem(const ReactionNetwork& network) {
  const std::size_t d = network.species_count();
  a_.assign(d, std::vector<Expr>(d));
  b_.assign(d, Expr());
  for (const auto& r : network.reactions()) {
    auto form = affine_form(r.propensity, d);
    if (!form)
      throw NonAffineError("reaction '" + r.name + "' has a propensity that is not affine in the state: " +
                           r.propensity.to_string());
    for (std::size_t i = 0; i < d; ++i) {
      if (r.stoich[i] == 0) continue;
      const Expr z = Expr::constant(r.stoich[i]);
      b_[i] = b_[i] + z * form->constant;
      for (std::size_t j = 0; j < d; ++j) a_[i][j] = a_[i][j] + z * form->coeff[j];
    }
    forms_.push_back(std::move(*form));
    stoich_.push_back(r.stoich);
  }
}

Matrix AffineMomentSystem::a_values(std::span<const double> params) const {
  Matrix out;
  for (const auto& row : a_) out.push_back(evaluate_all(row, params));
  return out;
}

std::vector<double> AffineMomentSystem::b_values(std::span<const double> params) const {
  return evaluate_all(b_, params);
}

Matrix AffineMomentSystem::da_values(std::size_t p, std::span<const double> params) const {
  Matrix out(dim(), std::vector<double>(dim()));
  for (std::size_t i = 0; i < dim(); ++i)
    for (std::size_t j = 0; j < dim(); ++j) out[i][j] = a_[i][j].derivative(p).evaluate({}, params);
  return out;
}

std::vector<double> AffineMomentSystem::db_values(std::size_t p, std::span<const double> params) const {
  std::vector<double> out;
  for (const auto& e : b_) out.push_back(e.derivative(p).evaluate({}, params));
  return out;
}

AffineMoments affine_moments(const ReactionNetwork& network, const State& x0, double t) {
  const AffineMomentSystem sys(network);
  const auto& params = network.param_values();
  const std::size_t d = sys.dim();
  const Matrix A = sys.a_values(params);
  const std::vector<double> b = sys.b_values(params);
  std::vector<double> c0;
  Matrix ck;
  for (const auto& form : sys.propensities()) {
    c0.push_back(form.constant.evaluate({}, params));
    ck.push_back(evaluate_all(form.coeff, params));
  }
  const auto& reactions = network.reactions();

  // State layout: mean (d) followed by the covariance, row-major (d * d).
  std::vector<double> y(d + d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) y[i] = static_cast<double>(x0[i]);
  auto rhs = [&](const std::vector<double>& s, std::vector<double>& ds, double) {
    for (std::size_t i = 0; i < d; ++i) {
      double v = b[i];
      for (std::size_t j = 0; j < d; ++j) v += A[i][j] * s[j];
      ds[i] = v;
    }
    const double* cov = s.data() + d;
    double* dcov = ds.data() + d;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        double v = 0.0;
        for (std::size_t l = 0; l < d; ++l) v += A[i][l] * cov[l * d + j] + cov[i * d + l] * A[j][l];
        dcov[i * d + j] = v;
      }
    for (std::size_t k = 0; k < reactions.size(); ++k) {
      double rate = c0[k];
      for (std::size_t j = 0; j < d; ++j) rate += ck[k][j] * s[j];
      const auto& z = reactions[k].stoich;
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) dcov[i * d + j] += z[i] * z[j] * rate;
    }
  };
  if (t > 0.0)
    odeint::integrate_adaptive(odeint::make_controlled<odeint::runge_kutta_dopri5<std::vector<double>>>(kAbsTol, kRelTol),
                               rhs, y, 0.0, t, t / 100.0);
  AffineMoments out;
  out.mean.assign(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(d));
  out.covariance.assign(d, std::vector<double>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) out.covariance[i][j] = y[d + i * d + j];
  return out;
}

double exact_sensitivity_affine(const ReactionNetwork& network, std::string_view param, const OutputFunction& f,
                                double T) {
  if (!(T >= 0.0) || !std::isfinite(T)) throw ValidationError("horizon T must be finite and non-negative");
  const AffineMomentSystem sys(network);
  const std::size_t d = sys.dim();
  const std::vector<double> w = linear_weights(f, d);
  const std::size_t p = network.param_index(param);
  const auto& params = network.param_values();
  const Matrix A = sys.a_values(params);
  const std::vector<double> b = sys.b_values(params);
  const Matrix dA = sys.da_values(p, params);
  const std::vector<double> db = sys.db_values(p, params);

  // State layout: m (d) followed by y = dm/dtheta (d).
  std::vector<double> s(2 * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) s[i] = static_cast<double>(network.initial_state()[i]);
  auto rhs = [&](const std::vector<double>& x, std::vector<double>& dx, double) {
    for (std::size_t i = 0; i < d; ++i) {
      double dm = b[i];
      double dy = db[i];
      for (std::size_t j = 0; j < d; ++j) {
        dm += A[i][j] * x[j];
        dy += A[i][j] * x[d + j] + dA[i][j] * x[j];
      }
      dx[i] = dm;
      dx[d + i] = dy;
    }
  };
  if (T > 0.0)
    odeint::integrate_adaptive(odeint::make_controlled<odeint::runge_kutta_dopri5<std::vector<double>>>(kAbsTol, kRelTol),
                               rhs, s, 0.0, T, T / 100.0);
  double out = 0.0;
  for (std::size_t i = 0; i < d; ++i) out += w[i] * s[d + i];
  return out;
}

}  // namespace srn
