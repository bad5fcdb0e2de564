#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>

namespace srn {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct Summary {
  std::size_t n = 0;
  double mean = 0.0;
  /// Standard error of the mean: sample standard deviation / sqrt(N).
  double std_dev = 0.0;
};

/// Mean and standard error of a sample (N >= 2), with (N - 1) in the
/// variance denominator. Throws StatisticsError for fewer than 2 samples.
Summary aggregate(std::span<const double> samples);

/// Streaming counterpart of aggregate(). Values are shifted by the first
/// sample before the compensated sums of x and x^2 are formed.
class SampleAccumulator {
 public:
  void add(double v) noexcept;
  std::size_t count() const noexcept { return n_; }
  /// Throws StatisticsError for fewer than 2 samples.
  Summary summary() const;

 private:
  std::size_t n_ = 0;
  double shift_ = 0.0;
  CompensatedSum sum_;
  CompensatedSum sum_sq_;
};

/// Standard normal CDF via erfc, accurate in both tails.
double normal_cdf(double z);

/// Probability that N(mean, sd^2) lies within 5% of `reference`:
/// Phi((b - mean)/sd) - Phi((a - mean)/sd) with a, b = s0 -/+ 0.05|s0|.
/// sd = 0 gives 1 inside [a, b] and 0 outside. Throws StatisticsError when
/// reference is 0.
double confidence_level(double mean, double std_dev, double reference);

}  // namespace srn
