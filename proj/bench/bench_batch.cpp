// Serial reference loop vs the OpenMP batch generator on identical work.

#include <vector>

#include <benchmark/benchmark.h>
#include <omp.h>

#include "srnsens/estimators/estimator.hpp"
#include "srnsens/model/builtin.hpp"
#include "srnsens/model/parser.hpp"

namespace {

using namespace srn;

const Estimator& estimator(Method method) {
  static const auto make = [](Method m) {
    const auto net = load_builtin("gene-expression");
    SensitivityRequest r{net, "theta4", parse_output("P", net), 20.0, m};
    if (is_finite_difference(m)) r.h = 0.01;
    r.seed = 1;
    return Estimator(r);
  };
  static const Estimator ppa = make(Method::Ppa);
  static const Estimator girsanov = make(Method::Girsanov);
  static const Estimator cfd = make(Method::Cfd);
  switch (method) {
    case Method::Girsanov: return girsanov;
    case Method::Cfd: return cfd;
    default: return ppa;
  }
}

void BM_Serial(benchmark::State& state) {
  const Estimator& est = estimator(static_cast<Method>(state.range(0)));
  std::vector<SampleValue> out(static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) {
    generate_samples_serial(est, 0, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
}

void BM_Parallel(benchmark::State& state) {
  const Estimator& est = estimator(static_cast<Method>(state.range(0)));
  std::vector<SampleValue> out(static_cast<std::size_t>(state.range(1)));
  const int threads = omp_get_num_procs();
  for (auto _ : state) {
    generate_samples_parallel(est, 0, out, threads);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
  state.counters["threads"] = threads;
}

void batch_args(benchmark::internal::Benchmark* b) {
  for (Method m : {Method::Ppa, Method::Girsanov, Method::Cfd})
    for (int n : {256, 2048}) b->Args({static_cast<long>(m), n});
  b->ArgNames({"method", "samples"})->Unit(benchmark::kMillisecond)->UseRealTime();
}

BENCHMARK(BM_Serial)->Apply(batch_args);
BENCHMARK(BM_Parallel)->Apply(batch_args);

}  // namespace

BENCHMARK_MAIN();
