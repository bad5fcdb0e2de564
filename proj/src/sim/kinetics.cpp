#include "srnsens/sim/kinetics.hpp"

#include "srnsens/error.hpp"

namespace srn {

Kinetics::Kinetics(ReactionNetwork network) : network_(std::move(network)), params_(network_.param_values()) {}

Kinetics::Kinetics(ReactionNetwork network, std::vector<double> params)
    : network_(std::move(network)), params_(std::move(params)) {
  if (params_.size() != network_.param_count()) throw ValidationError("parameter vector has the wrong length");
}

double Kinetics::rates(std::span<const Count> x, std::span<double> out) const {
  double total = 0.0;
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = network_.propensity(k, x, params_);
    total += out[k];
  }
  return total;
}

}  // namespace srn
