#include "srnsens/stats/summary.hpp"

#include <algorithm>
#include <cmath>

#include "srnsens/error.hpp"

namespace srn {

Summary aggregate(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 2) throw StatisticsError("at least 2 samples are needed for a standard error");
  CompensatedSum sum;
  for (double v : samples) sum.add(v);
  const double mean = sum.value() / static_cast<double>(n);
  CompensatedSum sq;
  for (double v : samples) sq.add((v - mean) * (v - mean));
  const double var = sq.value() / static_cast<double>(n - 1);
  return {n, mean, std::sqrt(var / static_cast<double>(n))};
}

void SampleAccumulator::add(double v) noexcept {
  if (n_ == 0) shift_ = v;
  const double d = v - shift_;
  sum_.add(d);
  sum_sq_.add(d * d);
  ++n_;
}

Summary SampleAccumulator::summary() const {
  if (n_ < 2) throw StatisticsError("at least 2 samples are needed for a standard error");
  const double n = static_cast<double>(n_);
  const double mean_d = sum_.value() / n;
  const double var = std::max(0.0, (sum_sq_.value() - n * mean_d * mean_d) / (n - 1.0));
  return {n_, shift_ + mean_d, std::sqrt(var / n)};
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double confidence_level(double mean, double std_dev, double reference) {
  if (reference == 0.0) throw StatisticsError("confidence level needs a non-zero reference value");
  if (!(std_dev >= 0.0)) throw StatisticsError("standard deviation must be non-negative");
  const double a = reference - 0.05 * std::abs(reference);
  const double b = reference + 0.05 * std::abs(reference);
  if (std_dev == 0.0) return mean >= a && mean <= b ? 1.0 : 0.0;
  const double za = (a - mean) / std_dev;
  const double zb = (b - mean) / std_dev;
  // Upper tail: 1 - Phi(z) = Phi(-z) avoids cancellation when both z > 0.
  const double p = za > 0.0 ? normal_cdf(-za) - normal_cdf(-zb) : normal_cdf(zb) - normal_cdf(za);
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace srn
