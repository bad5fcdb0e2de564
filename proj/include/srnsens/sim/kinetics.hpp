#pragma once

#include <span>
#include <vector>

#include "srnsens/model/network.hpp"

namespace srn {

/// A network with its parameter vector bound, ready for path simulation.
class Kinetics {
 public:
  explicit Kinetics(ReactionNetwork network);
  Kinetics(ReactionNetwork network, std::vector<double> params);

  const ReactionNetwork& network() const noexcept { return network_; }
  std::span<const double> params() const noexcept { return params_; }
  std::size_t species_count() const noexcept { return network_.species_count(); }
  std::size_t reaction_count() const noexcept { return network_.reaction_count(); }
  std::span<const int> stoich(std::size_t k) const { return network_.reaction(k).stoich; }

  double rate(std::size_t k, std::span<const Count> x) const { return network_.propensity(k, x, params_); }

  /// Writes lambda_k(x) into `out` (size K) and returns lambda_0(x).
  double rates(std::span<const Count> x, std::span<double> out) const;

 private:
  ReactionNetwork network_;
  std::vector<double> params_;
};

}  // namespace srn
