#include "srnsens/model/expr.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <utility>

#include "srnsens/error.hpp"

namespace srn {

struct Expr::Node {
  Op op = Op::Constant;
  double value = 0.0;
  std::size_t index = 0;
  std::string name;
  Expr a;  // lhs / base / rate
  Expr b;  // rhs / exponent
  std::vector<Consumption> reactants;
  std::vector<std::string> reactant_names;
};

namespace {

const Expr& zero_expr() {
  static const Expr zero = Expr::constant(0.0);
  return zero;
}

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

int precedence(Op op) {
  switch (op) {
    case Op::Add:
    case Op::Sub:
      return 1;
    case Op::Mul:
    case Op::Div:
      return 2;
    case Op::Neg:
      return 3;
    case Op::Pow:
      return 4;
    default:
      return 5;
  }
}

double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string("non-finite result in ") + what);
  return v;
}

}  // namespace

double pow_log_value(double base, double exponent, int order) {
  if (base == 0.0) {
    if (exponent > 0.0) return 0.0;
    throw DomainError("x^e*ln(x)^m at x = 0 with e <= 0");
  }
  if (base < 0.0) throw DomainError("logarithm of a negative base");
  const double l = std::log(base);
  double r = std::pow(base, exponent);
  for (int i = 0; i < order; ++i) r *= l;
  return checked(r, "power-log term");
}

double falling_factorial_ratio(Count x, int n) {
  if (x < n) return 0.0;
  double r = 1.0;
  for (int j = 0; j < n; ++j) r *= static_cast<double>(x - j) / static_cast<double>(j + 1);
  return r;
}

Expr::Expr() : node_(nullptr) {}

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::constant(double value) {
  auto n = std::make_shared<Node>();
  n->op = Op::Constant;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::param(std::size_t index, std::string name) {
  auto n = std::make_shared<Node>();
  n->op = Op::Param;
  n->index = index;
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::species(std::size_t index, std::string name) {
  auto n = std::make_shared<Node>();
  n->op = Op::Species;
  n->index = index;
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::mass_action(Expr rate, std::vector<Consumption> reactants,
                       std::vector<std::string> species_names) {
  if (rate.is_zero()) return zero_expr();
  auto n = std::make_shared<Node>();
  n->op = Op::MassAction;
  n->a = std::move(rate);
  n->reactants = std::move(reactants);
  n->reactant_names = std::move(species_names);
  return Expr(std::move(n));
}

Expr Expr::pow(Expr base, Expr exponent) {
  if (exponent.is_constant() && exponent.value() == 1.0) return base;
  if (exponent.is_zero()) return constant(1.0);
  return make_binary(Op::Pow, std::move(base), std::move(exponent));
}

Expr Expr::pow_log(Expr base, Expr exponent, int order) {
  if (order == 0) return pow(std::move(base), std::move(exponent));
  if (base.is_constant() && base.value() == 1.0) return zero_expr();
  auto n = std::make_shared<Node>();
  n->op = Op::PowLog;
  n->index = static_cast<std::size_t>(order);
  n->a = std::move(base);
  n->b = std::move(exponent);
  return Expr(std::move(n));
}

Expr Expr::make_binary(Op op, Expr a, Expr b) {
  if (a.is_constant() && b.is_constant()) {
    // Fold only when the result stays in the domain; otherwise keep the node
    // so evaluation reports the error.
    const double x = a.value(), y = b.value();
    double r = 0.0;
    bool ok = true;
    switch (op) {
      case Op::Add: r = x + y; break;
      case Op::Sub: r = x - y; break;
      case Op::Mul: r = x * y; break;
      case Op::Div: ok = y != 0.0; if (ok) r = x / y; break;
      case Op::Pow: r = std::pow(x, y); ok = std::isfinite(r); break;
      default: ok = false; break;
    }
    if (ok && std::isfinite(r)) return constant(r);
  }
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return Expr(std::move(n));
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return Expr::make_binary(Op::Add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  return Expr::make_binary(Op::Sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return zero_expr();
  if (a.is_constant() && a.value() == 1.0) return b;
  if (b.is_constant() && b.value() == 1.0) return a;
  return Expr::make_binary(Op::Mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (a.is_zero() && !(b.is_zero())) return zero_expr();
  if (b.is_constant() && b.value() == 1.0) return a;
  return Expr::make_binary(Op::Div, a, b);
}

Expr operator-(const Expr& a) {
  if (a.is_constant()) return Expr::constant(-a.value());
  if (a.op() == Op::Neg) return a.lhs();
  auto n = std::make_shared<Expr::Node>();
  n->op = Op::Neg;
  n->a = a;
  return Expr(std::move(n));
}

Op Expr::op() const { return node_ ? node_->op : Op::Constant; }
double Expr::value() const { return node_ ? node_->value : 0.0; }
std::size_t Expr::index() const { return node_->index; }
const std::string& Expr::name() const { return node_->name; }
const Expr& Expr::lhs() const { return node_->a; }
const Expr& Expr::rhs() const { return node_->b; }
const Expr& Expr::rate() const { return node_->a; }
const std::vector<Consumption>& Expr::reactants() const { return node_->reactants; }
const std::vector<std::string>& Expr::reactant_names() const { return node_->reactant_names; }

bool Expr::depends_on_param(std::size_t idx) const {
  switch (op()) {
    case Op::Constant:
    case Op::Species:
      return false;
    case Op::Param:
      return index() == idx;
    case Op::Neg:
    case Op::MassAction:
      return lhs().depends_on_param(idx);
    default:
      return lhs().depends_on_param(idx) || rhs().depends_on_param(idx);
  }
}

bool Expr::depends_on_any_param() const {
  switch (op()) {
    case Op::Constant:
    case Op::Species:
      return false;
    case Op::Param:
      return true;
    case Op::Neg:
    case Op::MassAction:
      return lhs().depends_on_any_param();
    default:
      return lhs().depends_on_any_param() || rhs().depends_on_any_param();
  }
}

bool Expr::depends_on_species() const {
  switch (op()) {
    case Op::Constant:
    case Op::Param:
      return false;
    case Op::Species:
      return true;
    case Op::Neg:
      return lhs().depends_on_species();
    case Op::MassAction:
      return !reactants().empty() || lhs().depends_on_species();
    default:
      return lhs().depends_on_species() || rhs().depends_on_species();
  }
}

double Expr::evaluate(std::span<const Count> x, std::span<const double> params) const {
  switch (op()) {
    case Op::Constant:
      return value();
    case Op::Param:
      return params[index()];
    case Op::Species:
      return static_cast<double>(x[index()]);
    case Op::Add:
      return checked(lhs().evaluate(x, params) + rhs().evaluate(x, params), "addition");
    case Op::Sub:
      return checked(lhs().evaluate(x, params) - rhs().evaluate(x, params), "subtraction");
    case Op::Mul:
      return checked(lhs().evaluate(x, params) * rhs().evaluate(x, params), "multiplication");
    case Op::Div: {
      const double den = rhs().evaluate(x, params);
      if (den == 0.0) throw DomainError("division by zero");
      return checked(lhs().evaluate(x, params) / den, "division");
    }
    case Op::Pow:
      return checked(std::pow(lhs().evaluate(x, params), rhs().evaluate(x, params)), "power");
    case Op::Neg:
      return -lhs().evaluate(x, params);
    case Op::MassAction: {
      double r = lhs().evaluate(x, params);
      for (const auto& c : reactants()) r *= falling_factorial_ratio(x[c.species], c.count);
      return checked(r, "mass-action term");
    }
    case Op::PowLog:
      return pow_log_value(lhs().evaluate(x, params), rhs().evaluate(x, params),
                           static_cast<int>(index()));
  }
  return 0.0;
}

Expr Expr::derivative(std::size_t p) const {
  if (!depends_on_param(p)) return zero_expr();
  switch (op()) {
    case Op::Constant:
    case Op::Species:
      return zero_expr();
    case Op::Param:
      return constant(1.0);
    case Op::Add:
      return lhs().derivative(p) + rhs().derivative(p);
    case Op::Sub:
      return lhs().derivative(p) - rhs().derivative(p);
    case Op::Mul:
      return lhs().derivative(p) * rhs() + lhs() * rhs().derivative(p);
    case Op::Div: {
      // (u/v)' = u'/v - u v' / v^2
      const Expr& u = lhs();
      const Expr& v = rhs();
      return u.derivative(p) / v - (u * v.derivative(p)) / pow(v, constant(2.0));
    }
    case Op::Pow:
    case Op::PowLog: {
      // d/dp [u^v ln(u)^m] = v' u^v ln(u)^(m+1)
      //                    + u' (v u^(v-1) ln(u)^m + m u^(v-1) ln(u)^(m-1))
      const Expr& u = lhs();
      const Expr& v = rhs();
      const int m = op() == Op::Pow ? 0 : static_cast<int>(index());
      Expr out;
      if (v.depends_on_param(p)) out = out + pow_log(u, v, m + 1) * v.derivative(p);
      if (u.depends_on_param(p)) {
        const Expr vm1 = v - constant(1.0);
        Expr inner = v * pow_log(u, vm1, m);
        if (m > 0) inner = inner + constant(m) * pow_log(u, vm1, m - 1);
        out = out + inner * u.derivative(p);
      }
      return out;
    }
    case Op::Neg:
      return -lhs().derivative(p);
    case Op::MassAction:
      return mass_action(lhs().derivative(p), reactants(), reactant_names());
  }
  return zero_expr();
}

namespace {

void render(const Expr& e, std::ostringstream& out, int parent_prec, bool right_side);

void render_child(const Expr& e, std::ostringstream& out, int prec, bool right_side) {
  render(e, out, prec, right_side);
}

void render(const Expr& e, std::ostringstream& out, int parent_prec, bool right_side) {
  const Op op = e.op();
  const int prec = precedence(op);
  bool parens = prec < parent_prec || (prec == parent_prec && right_side && op != Op::Pow);
  if (op == Op::Pow && prec == parent_prec && !right_side) parens = true;
  if (op == Op::Constant && e.value() < 0.0 && parent_prec > 1) parens = true;
  if (parens) out << '(';
  switch (op) {
    case Op::Constant:
      out << format_number(e.value());
      break;
    case Op::Param:
    case Op::Species:
      out << e.name();
      break;
    case Op::Add:
      render_child(e.lhs(), out, prec, false);
      out << " + ";
      render_child(e.rhs(), out, prec, true);
      break;
    case Op::Sub:
      render_child(e.lhs(), out, prec, false);
      out << " - ";
      render_child(e.rhs(), out, prec, true);
      break;
    case Op::Mul:
      render_child(e.lhs(), out, prec, false);
      out << " * ";
      render_child(e.rhs(), out, prec, true);
      break;
    case Op::Div:
      render_child(e.lhs(), out, prec, false);
      out << " / ";
      render_child(e.rhs(), out, prec, true);
      break;
    case Op::Pow:
      render_child(e.lhs(), out, prec, false);
      out << "^";
      render_child(e.rhs(), out, prec, true);
      break;
    case Op::Neg:
      out << '-';
      render_child(e.lhs(), out, prec, true);
      break;
    case Op::MassAction:
      // Reactants are implied by the reaction's left-hand side.
      out << "mass_action(";
      render(e.rate(), out, 0, false);
      out << ')';
      break;
    case Op::PowLog:
      out << "powlog(";
      render(e.lhs(), out, 0, false);
      out << ", ";
      render(e.rhs(), out, 0, false);
      out << ", " << e.index() << ')';
      break;
  }
  if (parens) out << ')';
}

}  // namespace

std::string Expr::to_string() const {
  std::ostringstream out;
  render(*this, out, 0, false);
  return out.str();
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.op() != b.op()) return false;
  switch (a.op()) {
    case Op::Constant:
      return a.value() == b.value();
    case Op::Param:
    case Op::Species:
      return a.index() == b.index();
    case Op::Neg:
      return a.lhs() == b.lhs();
    case Op::MassAction:
      return a.rate() == b.rate() && a.reactants() == b.reactants();
    case Op::PowLog:
      return a.index() == b.index() && a.lhs() == b.lhs() && a.rhs() == b.rhs();
    default:
      return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
}

}  // namespace srn
