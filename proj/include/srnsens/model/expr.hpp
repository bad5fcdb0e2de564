#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace srn {

using Count = std::int64_t;
/// Species counts, one coordinate per species.
using State = std::vector<Count>;

/// One reactant of a mass-action term: `count` molecules of species `species`.
struct Consumption {
  std::size_t species = 0;
  int count = 0;

  friend bool operator==(const Consumption&, const Consumption&) = default;
};

enum class Op {
  Constant,
  Param,
  Species,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
  Neg,
  /// rate * prod_i x_i (x_i - 1) ... (x_i - nu_i + 1) / nu_i!
  MassAction,
  /// base^exponent * ln(base)^order, taking the base -> 0+ limit (0) when
  /// exponent > 0.
  PowLog,
};

/// Immutable expression over species counts and parameters.
///
/// Copies share nodes. Builders fold constants and drop neutral elements so
/// that a derivative with respect to an absent parameter is the literal
/// constant 0.
class Expr {
 public:
  Expr();  // constant 0

  static Expr constant(double value);
  static Expr param(std::size_t index, std::string name);
  static Expr species(std::size_t index, std::string name);
  static Expr mass_action(Expr rate, std::vector<Consumption> reactants,
                          std::vector<std::string> species_names = {});
  static Expr pow(Expr base, Expr exponent);
  static Expr pow_log(Expr base, Expr exponent, int order = 1);

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);

  Op op() const;
  /// Literal value of a Constant node.
  double value() const;
  /// Param or species index; log order of a PowLog node.
  std::size_t index() const;
  /// Param or species name.
  const std::string& name() const;
  const Expr& lhs() const;
  const Expr& rhs() const;
  /// Rate expression of a MassAction node.
  const Expr& rate() const;
  const std::vector<Consumption>& reactants() const;
  const std::vector<std::string>& reactant_names() const;

  bool is_constant() const { return op() == Op::Constant; }
  bool is_zero() const { return is_constant() && value() == 0.0; }

  bool depends_on_param(std::size_t index) const;
  bool depends_on_any_param() const;
  bool depends_on_species() const;

  /// Tree-walk evaluation. Throws DomainError on a non-finite intermediate.
  double evaluate(std::span<const Count> x, std::span<const double> params) const;

  /// Exact symbolic partial derivative with respect to parameter `index`.
  Expr derivative(std::size_t param_index) const;

  /// Infix rendering in model-file syntax.
  std::string to_string() const;

  /// Structural equality.
  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node);
  static Expr make_binary(Op op, Expr a, Expr b);

  std::shared_ptr<const Node> node_;
};

/// Mass-action combinatorial factor x(x-1)...(x-n+1)/n!, zero when x < n.
double falling_factorial_ratio(Count x, int n);

/// base^exponent * ln(base)^order with the 0 limit at base == 0, exponent > 0.
double pow_log_value(double base, double exponent, int order);

}  // namespace srn
