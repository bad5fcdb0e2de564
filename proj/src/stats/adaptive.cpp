#include "srnsens/stats/adaptive.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <vector>

#include "srnsens/error.hpp"

namespace srn {

void AdaptivePolicy::validate() const {
  if (!(target_p > 0.0 && target_p < 1.0)) throw ValidationError("target confidence must lie in (0, 1)");
  if (!(growth >= 1.0)) throw ValidationError("batch growth factor must be at least 1");
  if (initial_batch < 2) throw ValidationError("initial batch must hold at least 2 samples");
  if (n_max < initial_batch) throw ValidationError("n_max must be at least the initial batch size");
}

namespace {

class Runner {
 public:
  Runner(const SensitivityRequest& request, const RunOptions& options)
      : start_(std::chrono::steady_clock::now()), est_(request), options_(options) {}

  void draw(std::uint64_t count) {
    batch_.resize(count);
    if (options_.threads == 1)
      generate_samples_serial(est_, next_, batch_);
    else
      generate_samples_parallel(est_, next_, batch_, options_.threads);
    next_ += count;
    for (const auto& s : batch_) {
      acc_.add(s.value);
      jumps_ += static_cast<double>(s.jumps);
      aux_ += static_cast<double>(s.aux_paths_used);
    }
  }

  std::uint64_t drawn() const { return next_; }
  Summary summary() const { return acc_.summary(); }

  EstimateReport report(std::optional<double> reference) const {
    const Summary sum = acc_.summary();
    EstimateReport r;
    const auto& req = est_.problem().request();
    r.method = req.method;
    r.h = req.h;
    r.seed = req.seed;
    r.n = sum.n;
    r.mean = sum.mean;
    r.std_dev = sum.std_dev;
    r.reference = reference;
    if (reference) r.p = confidence_level(sum.mean, sum.std_dev, *reference);
    r.mean_jumps = jumps_ / static_cast<double>(sum.n);
    r.mean_aux_paths = aux_ / static_cast<double>(sum.n);
    r.calibration = est_.calibration();
    r.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    return r;
  }

 private:
  std::chrono::steady_clock::time_point start_;
  Estimator est_;
  RunOptions options_;
  std::vector<SampleValue> batch_;
  SampleAccumulator acc_;
  std::uint64_t next_ = 0;
  double jumps_ = 0.0;
  double aux_ = 0.0;
};

}  // namespace

EstimateReport run_fixed(const SensitivityRequest& request, std::uint64_t n, std::optional<double> reference,
                         const RunOptions& options) {
  if (n < 2) throw ValidationError("sample count must be at least 2");
  if (reference && *reference == 0.0) throw StatisticsError("confidence level needs a non-zero reference value");
  Runner runner(request, options);
  constexpr std::uint64_t kChunk = 1 << 16;
  while (runner.drawn() < n) runner.draw(std::min(kChunk, n - runner.drawn()));
  return runner.report(reference);
}

EstimateReport run_adaptive(const SensitivityRequest& request, const AdaptivePolicy& policy, double reference,
                            const RunOptions& options) {
  policy.validate();
  if (reference == 0.0) throw StatisticsError("confidence level needs a non-zero reference value");
  Runner runner(request, options);
  double batch = static_cast<double>(policy.initial_batch);
  while (true) {
    const auto size = std::min(static_cast<std::uint64_t>(batch), policy.n_max - runner.drawn());
    runner.draw(size);
    const Summary sum = runner.summary();
    const double p = confidence_level(sum.mean, sum.std_dev, reference);
    if (p >= policy.target_p || runner.drawn() >= policy.n_max) {
      EstimateReport r = runner.report(reference);
      r.target_met = p >= policy.target_p;
      return r;
    }
    batch *= policy.growth;
  }
}

}  // namespace srn
