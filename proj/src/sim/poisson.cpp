#include "srnsens/sim/poisson.hpp"

#include <cmath>
#include <string>

#include "srnsens/error.hpp"

namespace srn {

namespace {

std::int64_t poisson_inversion(double r, RngStream& rng) {
  const double p0 = std::exp(-r);
  while (true) {
    double p = p0;
    double s = p;
    std::int64_t n = 0;
    const double u = rng.uniform();
    while (u > s) {
      ++n;
      p *= r / static_cast<double>(n);
      if (p == 0.0) break;  // u fell in the rounding gap below 1; redraw
      s += p;
    }
    if (u <= s) return n;
  }
}

// W. Hormann, "The transformed rejection method for generating Poisson
// random variables", Insurance: Mathematics and Economics 12 (1993).
std::int64_t poisson_ptrs(double r, RngStream& rng) {
  const double log_r = std::log(r);
  const double b = 0.931 + 2.53 * std::sqrt(r);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  while (true) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::fabs(u);
    const double k = std::floor((2.0 * a / us + b) * u + r + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<std::int64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
    const double rhs = -r + k * log_r - std::lgamma(k + 1.0);
    if (lhs <= rhs) return static_cast<std::int64_t>(k);
  }
}

}  // namespace

std::int64_t generate_poisson(double r, RngStream& rng) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("Poisson mean must be finite and non-negative, got " + std::to_string(r));
  if (r == 0.0) return 0;
  if (r <= kPoissonInversionLimit) return poisson_inversion(r, rng);
  return poisson_ptrs(r, rng);
}

}  // namespace srn
