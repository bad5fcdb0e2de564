#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "srnsens/cli/record.hpp"
#include "srnsens/estimators/request.hpp"
#include "srnsens/stats/adaptive.hpp"

namespace srn {

/// Finite-difference steps tried in order until one reaches the target.
inline const std::vector<double> kDefaultHSchedule{0.1, 0.01, 0.001, 0.0001};

struct BenchmarkCase {
  std::string model;
  std::string param;
  std::string f;
  double T = 0.0;
  Method method = Method::Ppa;
  double target_p = 0.95;
  std::vector<double> h_schedule = kDefaultHSchedule;
  /// Fixed sample count; every h in the schedule then yields one row.
  std::optional<std::uint64_t> n;
  std::uint64_t n_max = 10'000'000;
  std::vector<std::pair<std::string, double>> set;
  /// Reference value; the affine oracle is used when absent.
  std::optional<double> ref;
};

struct BenchmarkSuite {
  std::vector<BenchmarkCase> cases;
  /// Multiplies n_max and fixed sample counts, in (0, 1].
  double scale = 1.0;
};

/// "paper" (all four models, all methods, target 0.95) or "pitfalls"
/// (birth-death, T = 100, h in {0.1, 0.01}, N = 10^4).
BenchmarkSuite builtin_suite(std::string_view name);

/// Suite from JSON: {"scale": s, "cases": [{"model", "param", "f", "T",
/// "method", "target_p"?, "h_schedule"?, "n"?, "n_max"?, "set"?: {id: v},
/// "ref"?: number | "oracle"}]}. Throws ValidationError, including for an
/// empty case list.
BenchmarkSuite parse_suite(const nlohmann::json& j);
BenchmarkSuite load_suite_file(const std::string& path);

/// Checks that every model loads, every parameter exists, every f parses and
/// a reference is available.
void validate_suite(const BenchmarkSuite& suite);

struct CaseOutcome {
  std::vector<ResultRecord> rows;
  /// False when an adaptive case hit n_max for every h tried.
  bool target_met = true;
};

struct BenchmarkOptions {
  std::uint64_t seed = 1;
  RunOptions run;
  bool timing = true;
};

CaseOutcome run_case(const BenchmarkCase& c, double scale, const BenchmarkOptions& options);

}  // namespace srn
