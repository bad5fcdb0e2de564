#include "srnsens/cli/app.hpp"

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <omp.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "srnsens/cli/record.hpp"
#include "srnsens/cli/suite.hpp"
#include "srnsens/error.hpp"
#include "srnsens/model/builtin.hpp"
#include "srnsens/model/parser.hpp"
#include "srnsens/oracle/affine.hpp"
#include "srnsens/stats/adaptive.hpp"

namespace srn {

namespace {

struct ModelArgs {
  std::string model;
  std::vector<std::string> set;
  std::string param;
  std::string f;
  double T = 0.0;
};

struct EstimateArgs {
  ModelArgs m;
  std::string method = "ppa";
  std::optional<double> h;
  std::optional<std::uint64_t> n;
  std::optional<double> target_p;
  std::optional<std::string> ref;
  std::uint64_t n_max = 10'000'000;
  int n0 = 100;
  int m0 = 10;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string format = "json";
  bool no_timing = false;
};

struct BenchmarkArgs {
  std::optional<std::string> suite_file;
  std::optional<std::string> builtin;
  std::optional<double> scale;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string format = "csv";
  bool no_timing = false;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

void add_model_options(CLI::App& cmd, ModelArgs& a) {
  cmd.add_option("--model", a.model, "Model file or builtin:<name>")->required()->envname("SRNSENS_MODEL");
  cmd.add_option("--set", a.set, "Override a parameter or initial count, id=value (repeatable)")
      ->envname("SRNSENS_SET")
      ->delimiter(';');
  cmd.add_option("--param", a.param, "Sensitive parameter")->required()->envname("SRNSENS_PARAM");
  cmd.add_option("--f", a.f, "Output function of the species counts")->required()->envname("SRNSENS_F");
  cmd.add_option("--T", a.T, "Observation time")->required()->envname("SRNSENS_T")->check(CLI::NonNegativeNumber);
}

ReactionNetwork build_network(const ModelArgs& a) {
  ReactionNetwork net = load_model(a.model);
  for (const auto& item : a.set) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("--set expects id=value, got '" + item + "'");
    const std::string id = item.substr(0, eq);
    const std::string text = item.substr(eq + 1);
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
    } catch (const std::exception&) {
      throw UsageError("--set " + id + ": '" + text + "' is not a number");
    }
    if (net.find_param(id)) {
      net = net.with_param(id, value);
    } else if (net.find_species(id)) {
      if (value < 0 || value != static_cast<double>(static_cast<Count>(value)))
        throw UsageError("--set " + id + ": initial counts must be non-negative integers");
      net = net.with_initial(id, static_cast<Count>(value));
    } else {
      throw UsageError("--set: unknown parameter or species '" + id + "'");
    }
  }
  net.param_index(a.param);
  return net;
}

int resolve_threads(int requested) { return requested > 0 ? requested : omp_get_num_procs(); }

void print_json(std::ostream& out, const nlohmann::ordered_json& j) { out << j.dump(2) << '\n'; }

int cmd_estimate(const EstimateArgs& a, std::ostream& out) {
  const auto method = parse_method(a.method);
  if (!method) throw UsageError("unknown method '" + a.method + "' (ppa, girsanov, crp, cfd)");
  if (a.n && a.target_p) throw UsageError("--n and --target-p are mutually exclusive");
  if (a.target_p && !a.ref) throw UsageError("--target-p needs --ref");

  const ReactionNetwork net = build_network(a.m);
  const OutputFunction f = parse_output(a.m.f, net);
  SensitivityRequest req{net, a.m.param, f, a.m.T, *method};
  req.h = a.h;
  req.n0 = a.n0;
  req.m0 = a.m0;
  req.seed = a.seed;

  std::optional<double> reference;
  if (a.ref) {
    if (*a.ref == "oracle") {
      reference = exact_sensitivity_affine(net, a.m.param, f, a.m.T);
    } else {
      try {
        std::size_t used = 0;
        reference = std::stod(*a.ref, &used);
        if (used != a.ref->size()) throw std::invalid_argument(*a.ref);
      } catch (const std::exception&) {
        throw UsageError("--ref must be a number or 'oracle'");
      }
    }
  }

  const RunOptions run{resolve_threads(a.threads)};
  EstimateReport report;
  if (a.target_p) {
    AdaptivePolicy policy;
    policy.target_p = *a.target_p;
    policy.n_max = a.n_max;
    report = run_adaptive(req, policy, *reference, run);
  } else {
    report = run_fixed(req, a.n.value_or(10'000), reference, run);
  }

  ResultRecord row;
  row.model = a.m.model;
  row.param = a.m.param;
  row.T = a.m.T;
  row.method = std::string(method_name(*method));
  row.h = report.h;
  row.n = report.n;
  row.mean = report.mean;
  row.std_dev = report.std_dev;
  row.p = report.p;
  row.elapsed_s = a.no_timing ? 0.0 : report.elapsed_s;
  row.seed = report.seed;

  if (a.format == "csv") {
    out << csv_header() << '\n' << to_csv_row(row) << '\n';
  } else {
    auto j = to_json(row);
    j["reference"] = reference ? nlohmann::ordered_json(*reference) : nlohmann::ordered_json(nullptr);
    j["target_met"] = report.target_met ? nlohmann::ordered_json(*report.target_met) : nlohmann::ordered_json(nullptr);
    j["mean_jumps"] = report.mean_jumps;
    if (report.calibration) {
      j["mean_aux_paths"] = report.mean_aux_paths;
      j["ppa_c"] = report.calibration->c;
      j["r_tot_estimate"] = report.calibration->r_tot_estimate;
    }
    print_json(out, j);
  }
  return report.target_met.value_or(true) ? kExitOk : kExitTargetNotReached;
}

int cmd_benchmark(const BenchmarkArgs& a, std::ostream& out, std::ostream& err) {
  if (a.suite_file.has_value() == a.builtin.has_value())
    throw UsageError("benchmark needs exactly one of --suite or --builtin-suite");
  BenchmarkSuite suite = a.suite_file ? load_suite_file(*a.suite_file) : builtin_suite(*a.builtin);
  if (a.scale) suite.scale = *a.scale;
  validate_suite(suite);

  BenchmarkOptions opts;
  opts.seed = a.seed;
  opts.run.threads = resolve_threads(a.threads);
  opts.timing = !a.no_timing;

  const bool csv = a.format == "csv";
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  if (csv) out << csv_header() << '\n' << std::flush;
  bool partial = false;
  for (const auto& c : suite.cases) {
    try {
      const CaseOutcome outcome = run_case(c, suite.scale, opts);
      partial = partial || !outcome.target_met;
      for (const auto& row : outcome.rows) {
        if (csv)
          out << to_csv_row(row) << '\n' << std::flush;
        else
          rows.push_back(to_json(row));
      }
    } catch (const Error& e) {
      partial = true;
      err << "error: case " << c.model << " " << c.param << " T=" << format_double(c.T) << " "
          << method_name(c.method) << ": " << e.what() << '\n';
    }
  }
  if (!csv) print_json(out, rows);
  return partial ? kExitPartialFailure : kExitOk;
}

int cmd_oracle(const ModelArgs& a, std::ostream& out) {
  const ReactionNetwork net = build_network(a);
  const OutputFunction f = parse_output(a.f, net);
  const double value = exact_sensitivity_affine(net, a.param, f, a.T);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", value);
  out << buf << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Parameter sensitivity estimation for stochastic reaction networks", "srnsens"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Estimate one sensitivity");
  add_model_options(*estimate, est.m);
  estimate->add_option("--method", est.method, "ppa, girsanov, crp or cfd")->envname("SRNSENS_METHOD")
      ->check(CLI::IsMember({"ppa", "girsanov", "crp", "cfd"}));
  estimate->add_option("--h", est.h, "Finite-difference step (crp, cfd)")->envname("SRNSENS_H")
      ->check(CLI::PositiveNumber);
  auto* n_opt = estimate->add_option("--n", est.n, "Fixed sample count (default 10000)")->envname("SRNSENS_N")
      ->check(CLI::Range(std::uint64_t{2}, std::numeric_limits<std::uint64_t>::max()));
  auto* p_opt = estimate->add_option("--target-p", est.target_p, "Grow N until this confidence level is reached")
      ->envname("SRNSENS_TARGET_P")->check(CLI::Range(0.0, 1.0));
  n_opt->excludes(p_opt);
  estimate->add_option("--ref", est.ref, "Reference value for p, or 'oracle'")->envname("SRNSENS_REF");
  estimate->add_option("--n-max", est.n_max, "Sample cap of adaptive runs")->envname("SRNSENS_N_MAX")
      ->check(CLI::PositiveNumber);
  estimate->add_option("--n0", est.n0, "PPA pilot paths")->envname("SRNSENS_N0")->check(CLI::PositiveNumber);
  estimate->add_option("--m0", est.m0, "PPA expected auxiliary paths")->envname("SRNSENS_M0")
      ->check(CLI::PositiveNumber);
  estimate->add_option("--seed", est.seed, "Master seed")->envname("SRNSENS_SEED");
  estimate->add_option("--threads", est.threads, "Worker threads (default: all cores)")->envname("SRNSENS_THREADS")
      ->check(CLI::NonNegativeNumber);
  estimate->add_option("--format", est.format, "json or csv")->envname("SRNSENS_FORMAT")
      ->check(CLI::IsMember({"json", "csv"}));
  estimate->add_flag("--no-timing", est.no_timing, "Report elapsed_s as 0 for reproducible output")
      ->envname("SRNSENS_NO_TIMING");

  BenchmarkArgs bench;
  auto* benchmark = app.add_subcommand("benchmark", "Run a benchmark suite and emit one row per case");
  benchmark->add_option("--suite", bench.suite_file, "Suite file (JSON)")->envname("SRNSENS_SUITE");
  benchmark->add_option("--builtin-suite", bench.builtin, "paper or pitfalls")->envname("SRNSENS_BUILTIN_SUITE");
  benchmark->add_option("--scale", bench.scale, "Scale factor for sample caps, in (0, 1]")
      ->envname("SRNSENS_SCALE");
  benchmark->add_option("--seed", bench.seed, "Master seed")->envname("SRNSENS_SEED");
  benchmark->add_option("--threads", bench.threads, "Worker threads (default: all cores)")
      ->envname("SRNSENS_THREADS")->check(CLI::NonNegativeNumber);
  benchmark->add_option("--format", bench.format, "csv or json")->envname("SRNSENS_FORMAT")
      ->check(CLI::IsMember({"json", "csv"}));
  benchmark->add_flag("--no-timing", bench.no_timing, "Report elapsed_s as 0 for reproducible output")
      ->envname("SRNSENS_NO_TIMING");

  ModelArgs orc;
  auto* oracle = app.add_subcommand("oracle", "Exact sensitivity of an affine network");
  add_model_options(*oracle, orc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (estimate->parsed()) return cmd_estimate(est, out);
    if (benchmark->parsed()) return cmd_benchmark(bench, out, err);
    return cmd_oracle(orc, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitModelError;
  } catch (const MethodUnusable& e) {
    err << "error: " << e.what() << '\n';
    return kExitMethodUnusable;
  } catch (const NonAffineError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNonAffine;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const StatisticsError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace srn
