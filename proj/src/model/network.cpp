#include "srnsens/model/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "srnsens/error.hpp"

namespace srn {

namespace {

void check_identifiers(const Expr& e, std::size_t n_species, std::size_t n_params,
                       const std::string& where) {
  switch (e.op()) {
    case Op::Constant:
      return;
    case Op::Param:
      if (e.index() >= n_params) throw ValidationError(where + ": unknown parameter '" + e.name() + "'");
      return;
    case Op::Species:
      if (e.index() >= n_species) throw ValidationError(where + ": unknown species '" + e.name() + "'");
      return;
    case Op::Neg:
      check_identifiers(e.lhs(), n_species, n_params, where);
      return;
    case Op::MassAction:
      check_identifiers(e.rate(), n_species, n_params, where);
      for (const auto& c : e.reactants())
        if (c.species >= n_species) throw ValidationError(where + ": mass-action reactant out of range");
      return;
    default:
      check_identifiers(e.lhs(), n_species, n_params, where);
      check_identifiers(e.rhs(), n_species, n_params, where);
      return;
  }
}

}  // namespace

ReactionNetwork::ReactionNetwork(std::vector<std::string> species, std::vector<std::string> param_names,
                                 std::vector<double> param_values, std::vector<Reaction> reactions,
                                 State initial_state)
    : species_(std::make_shared<const std::vector<std::string>>(std::move(species))),
      param_names_(std::make_shared<const std::vector<std::string>>(std::move(param_names))),
      param_values_(std::move(param_values)),
      reactions_(std::make_shared<const std::vector<Reaction>>(std::move(reactions))),
      initial_(std::move(initial_state)) {
  validate();
  auto compiled = std::make_shared<std::vector<CompiledExpr>>();
  compiled->reserve(reactions_->size());
  for (const auto& r : *reactions_) compiled->emplace_back(r.propensity);
  compiled_ = std::move(compiled);
}

void ReactionNetwork::validate() const {
  const std::size_t d = species_->size();
  if (d == 0) throw ValidationError("network must declare at least one species");
  if (reactions_->empty()) throw ValidationError("network must have at least one reaction");
  if (param_values_.size() != param_names_->size())
    throw ValidationError("parameter names and values differ in length");
  if (initial_.size() != d) throw ValidationError("initial state length differs from species count");
  if (!is_valid_state(initial_)) throw ValidationError("initial state has a negative count");

  std::set<std::string> seen;
  for (const auto& s : *species_)
    if (!seen.insert(s).second) throw ValidationError("duplicate identifier '" + s + "'");
  for (const auto& p : *param_names_)
    if (!seen.insert(p).second) throw ValidationError("duplicate identifier '" + p + "'");
  for (double v : param_values_)
    if (!std::isfinite(v)) throw ValidationError("parameter values must be finite");

  for (const auto& r : *reactions_) {
    const std::string where = "reaction '" + r.name + "'";
    if (r.stoich.size() != d)
      throw ValidationError(where + ": stoichiometric vector has length " + std::to_string(r.stoich.size()) +
                            ", expected " + std::to_string(d));
    check_identifiers(r.propensity, d, param_names_->size(), where);
    for (const auto& c : r.reactants)
      if (c.species >= d || c.count <= 0) throw ValidationError(where + ": invalid reactant");

    // Firing must never drive a count negative: the propensity has to vanish
    // whenever a consumed species is short. Probe the boundary states.
    for (std::size_t i = 0; i < d; ++i) {
      if (r.stoich[i] >= 0) continue;
      const Count need = -static_cast<Count>(r.stoich[i]);
      for (Count fill : {Count{0}, Count{1}, Count{3}, Count{10}, Count{100}}) {
        for (Count xi = 0; xi < need; ++xi) {
          State probe(d, fill);
          probe[i] = xi;
          double rate = 0.0;
          try {
            rate = r.propensity.evaluate(probe, param_values_);
          } catch (const DomainError&) {
            continue;
          }
          if (rate != 0.0)
            throw ValidationError(where + ": propensity is positive when " + (*species_)[i] + " = " +
                                  std::to_string(xi) + ", but firing consumes " + std::to_string(need));
        }
      }
    }
  }
}

std::optional<std::size_t> ReactionNetwork::find_species(std::string_view name) const {
  auto it = std::find(species_->begin(), species_->end(), name);
  if (it == species_->end()) return std::nullopt;
  return static_cast<std::size_t>(it - species_->begin());
}

std::optional<std::size_t> ReactionNetwork::find_param(std::string_view name) const {
  auto it = std::find(param_names_->begin(), param_names_->end(), name);
  if (it == param_names_->end()) return std::nullopt;
  return static_cast<std::size_t>(it - param_names_->begin());
}

std::size_t ReactionNetwork::param_index(std::string_view name) const {
  if (auto i = find_param(name)) return *i;
  throw ValidationError("unknown parameter '" + std::string(name) + "'");
}

ReactionNetwork ReactionNetwork::with_param(std::string_view name, double value) const {
  if (!std::isfinite(value)) throw ValidationError("parameter values must be finite");
  ReactionNetwork copy = *this;
  copy.param_values_[param_index(name)] = value;
  return copy;
}

ReactionNetwork ReactionNetwork::with_initial(std::string_view species, Count count) const {
  auto i = find_species(species);
  if (!i) throw ValidationError("unknown species '" + std::string(species) + "'");
  if (count < 0) throw ValidationError("initial counts must be non-negative");
  ReactionNetwork copy = *this;
  copy.initial_[*i] = count;
  return copy;
}

ReactionNetwork ReactionNetwork::with_initial_state(State x0) const {
  if (x0.size() != species_count()) throw ValidationError("initial state length differs from species count");
  if (!is_valid_state(x0)) throw ValidationError("initial state has a negative count");
  ReactionNetwork copy = *this;
  copy.initial_ = std::move(x0);
  return copy;
}

double ReactionNetwork::propensity(std::size_t k, std::span<const Count> x, std::span<const double> params) const {
  const double v = (*compiled_)[k](x, params);
  if (!(v >= 0.0) || !std::isfinite(v))
    throw DomainError("propensity of reaction '" + (*reactions_)[k].name + "' evaluated to " + std::to_string(v));
  return v;
}

OutputFunction::OutputFunction(Expr expr) : expr_(std::move(expr)), compiled_(expr_) {
  if (expr_.depends_on_any_param()) throw ValidationError("output function may not reference parameters");
}

bool is_valid_state(std::span<const Count> x) {
  return std::all_of(x.begin(), x.end(), [](Count c) { return c >= 0; });
}

void apply_stoich(State& x, std::span<const int> stoich) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] += stoich[i];
    if (x[i] < 0) {
      for (std::size_t j = 0; j <= i; ++j) x[j] -= stoich[j];
      throw DomainError("reaction would drive species " + std::to_string(i) + " negative");
    }
  }
}

}  // namespace srn
