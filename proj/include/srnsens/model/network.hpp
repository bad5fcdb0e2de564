#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "srnsens/model/expr.hpp"
#include "srnsens/model/program.hpp"

namespace srn {

struct Reaction {
  std::string name;
  /// Net state change applied when the reaction fires.
  std::vector<int> stoich;
  /// Left-hand side of the reaction, used by mass_action() and validation.
  std::vector<Consumption> reactants;
  /// Right-hand side, kept for printing.
  std::vector<Consumption> products;
  Expr propensity;
  /// True when the propensity was written as mass_action(...) sugar.
  bool mass_action_sugar = false;
};

/// A validated, immutable reaction network with a parameter table and an
/// initial state.
///
/// Copies are cheap: reactions and compiled propensities are shared. Changing a
/// parameter value or initial count produces a new network.
class ReactionNetwork {
 public:
  ReactionNetwork(std::vector<std::string> species, std::vector<std::string> param_names,
                  std::vector<double> param_values, std::vector<Reaction> reactions,
                  State initial_state);

  std::size_t species_count() const noexcept { return species_->size(); }
  std::size_t reaction_count() const noexcept { return reactions_->size(); }
  std::size_t param_count() const noexcept { return param_names_->size(); }

  const std::vector<std::string>& species_names() const noexcept { return *species_; }
  const std::vector<std::string>& param_names() const noexcept { return *param_names_; }
  const std::vector<double>& param_values() const noexcept { return param_values_; }
  const std::vector<Reaction>& reactions() const noexcept { return *reactions_; }
  const Reaction& reaction(std::size_t k) const { return (*reactions_)[k]; }
  const State& initial_state() const noexcept { return initial_; }

  std::optional<std::size_t> find_species(std::string_view name) const;
  std::optional<std::size_t> find_param(std::string_view name) const;
  /// Index of a parameter; throws ValidationError naming the parameter if absent.
  std::size_t param_index(std::string_view name) const;

  double param(std::string_view name) const { return param_values_[param_index(name)]; }

  ReactionNetwork with_param(std::string_view name, double value) const;
  ReactionNetwork with_initial(std::string_view species, Count count) const;
  ReactionNetwork with_initial_state(State x0) const;

  /// Compiled propensity of reaction k (reads parameters by index).
  const CompiledExpr& compiled_propensity(std::size_t k) const { return (*compiled_)[k]; }

  /// lambda_k(x, params); throws DomainError if negative or non-finite.
  double propensity(std::size_t k, std::span<const Count> x, std::span<const double> params) const;

 private:
  ReactionNetwork() = default;
  void validate() const;

  std::shared_ptr<const std::vector<std::string>> species_;
  std::shared_ptr<const std::vector<std::string>> param_names_;
  std::vector<double> param_values_;
  std::shared_ptr<const std::vector<Reaction>> reactions_;
  std::shared_ptr<const std::vector<CompiledExpr>> compiled_;
  State initial_;
};

/// f(x): an expression over species counts and constants only.
class OutputFunction {
 public:
  explicit OutputFunction(Expr expr);

  double operator()(std::span<const Count> x) const { return compiled_(x, {}); }
  const Expr& expr() const noexcept { return expr_; }
  std::string to_string() const { return expr_.to_string(); }

 private:
  Expr expr_;
  CompiledExpr compiled_;
};

/// True when every coordinate is non-negative.
bool is_valid_state(std::span<const Count> x);

/// x + stoich; throws DomainError if a coordinate would become negative.
void apply_stoich(State& x, std::span<const int> stoich);

}  // namespace srn
