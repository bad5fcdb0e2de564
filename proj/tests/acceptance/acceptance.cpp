// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <set>
#include <string>
#include <vector>

#include <omp.h>

#include "srnsens/cli/app.hpp"
#include "srnsens/error.hpp"
#include "srnsens/estimators/estimator.hpp"
#include "srnsens/model/builtin.hpp"
#include "srnsens/model/parser.hpp"
#include "srnsens/oracle/affine.hpp"
#include "srnsens/stats/adaptive.hpp"
#include "support/checks.hpp"

namespace {

using namespace srn;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

/// Collects detail lines and the verdict of one criterion.
struct Criterion {
  int id;
  std::string title;
  bool pass = true;
  std::vector<std::string> details;

  void check(bool ok, const std::string& line) {
    pass = pass && ok;
    details.push_back(std::string(ok ? "ok   " : "FAIL ") + line);
  }
  void info(const std::string& line) { details.push_back("info " + line); }
};

const int kThreads = omp_get_num_procs();

SensitivityRequest request(const ReactionNetwork& net, const std::string& param, const std::string& f, double T,
                           Method method, std::uint64_t seed, std::optional<double> h = std::nullopt) {
  SensitivityRequest r{net, param, parse_output(f, net), T, method};
  r.seed = seed;
  r.h = h;
  return r;
}

EstimateReport fixed(const SensitivityRequest& r, std::uint64_t n, std::optional<double> ref = std::nullopt) {
  return run_fixed(r, n, ref, RunOptions{kThreads});
}

struct GeneRow {
  double theta;
  double T;
  double exact;
};

// Exact values published for the two affine examples.
constexpr double kBirthDeath20 = -5.9399;
constexpr double kBirthDeath100 = -9.995;
const std::vector<GeneRow> kGeneRows{{0.0693, 20, -207.544}, {0.0693, 100, -618.776}, {0.0023, 20, -439.601},
                                     {0.0023, 100, -12213.9}, {0.0, 20, -451.812},    {0.0, 100, -14158.6}};

Criterion affine_oracle() {
  Criterion c{1, "affine oracle reproduces the eight exact values to 4 significant figures in < 1 s"};
  const auto start = Clock::now();
  const auto bd = load_builtin("birth-death");
  const OutputFunction s = parse_output("S", bd);
  std::vector<std::pair<std::string, std::pair<double, double>>> results;
  results.push_back({"birth-death T=20", {exact_sensitivity_affine(bd, "theta2", s, 20.0), kBirthDeath20}});
  results.push_back({"birth-death T=100", {exact_sensitivity_affine(bd, "theta2", s, 100.0), kBirthDeath100}});
  const auto gene = load_builtin("gene-expression");
  const OutputFunction p = parse_output("P", gene);
  for (const auto& row : kGeneRows)
    results.push_back({fmt("gene theta=%g T=%g", row.theta, row.T),
                       {exact_sensitivity_affine(gene.with_param("theta4", row.theta), "theta4", p, row.T), row.exact}});
  const double elapsed = seconds_since(start);
  for (const auto& [name, v] : results)
    c.check(testing::agrees_to_4_sig_figs(v.first, v.second), fmt("%-22s %.10g vs %g", name.c_str(), v.first, v.second));
  c.check(elapsed < 1.0, fmt("runtime %.3f s", elapsed));
  return c;
}

void unbiased_case(Criterion& c, const std::string& label, const SensitivityRequest& r, std::uint64_t n,
                   double exact, double time_limit) {
  const auto start = Clock::now();
  const auto rep = fixed(r, n);
  const double elapsed = seconds_since(start);
  const double z = std::abs(rep.mean - exact) / rep.std_dev;
  c.check(z <= 4.0 && elapsed < time_limit,
          fmt("%-30s N=%-6llu mean %.6g  sd %.4g  exact %g  |z|=%.2f  %.1f s", label.c_str(),
              static_cast<unsigned long long>(n), rep.mean, rep.std_dev, exact, z, elapsed));
}

Criterion ppa_unbiased() {
  Criterion c{2, "PPA unbiased on birth-death and gene expression (|mean - exact| <= 4 sd, < 2 min per case)"};
  const auto bd = load_builtin("birth-death");
  unbiased_case(c, "birth-death T=20", request(bd, "theta2", "S", 20.0, Method::Ppa, 201), 10'000, kBirthDeath20,
                120.0);
  unbiased_case(c, "birth-death T=100", request(bd, "theta2", "S", 100.0, Method::Ppa, 202), 10'000,
                kBirthDeath100, 120.0);
  const auto gene = load_builtin("gene-expression");
  std::uint64_t seed = 210;
  for (const auto& row : kGeneRows) {
    const std::uint64_t n = row.T == 100.0 ? 1'000 : 10'000;
    unbiased_case(c, fmt("gene theta=%g T=%g", row.theta, row.T),
                  request(gene.with_param("theta4", row.theta), "theta4", "P", row.T, Method::Ppa, seed++), n,
                  row.exact, 120.0);
  }
  return c;
}

Criterion girsanov() {
  Criterion c{3, "Girsanov unbiased on birth-death (N = 1e5) and unusable on gene expression at theta = 0"};
  const auto bd = load_builtin("birth-death");
  unbiased_case(c, "birth-death T=20", request(bd, "theta2", "S", 20.0, Method::Girsanov, 301), 100'000,
                kBirthDeath20, 1e9);
  unbiased_case(c, "birth-death T=100", request(bd, "theta2", "S", 100.0, Method::Girsanov, 302), 100'000,
                kBirthDeath100, 1e9);
  const auto gene = load_builtin("gene-expression").with_param("theta4", 0.0);
  bool unusable = false;
  try {
    fixed(request(gene, "theta4", "P", 20.0, Method::Girsanov, 303), 100);
  } catch (const MethodUnusable&) {
    unusable = true;
  }
  c.check(unusable, "gene expression theta4=0 raises method-unusable");
  return c;
}

/// E[X(T)] of the birth-death process from 0 as a function of the death rate.
double bd_mean(double theta2, double T) { return (0.1 / theta2) * (1.0 - std::exp(-theta2 * T)); }

Criterion pitfalls() {
  Criterion c{4, "finite-difference bias pitfalls at birth-death T=100, N=1e4 (< 1 min per cell)"};
  const auto bd = load_builtin("birth-death");
  std::uint64_t seed = 401;
  for (Method m : {Method::Cfd, Method::Crp}) {
    for (double h : {0.1, 0.01}) {
      const auto start = Clock::now();
      const auto rep = fixed(request(bd, "theta2", "S", 100.0, m, seed++, h), 10'000, kBirthDeath100);
      const double elapsed = seconds_since(start);
      const double p = *rep.p;
      const bool ok = h == 0.1 ? (rep.mean >= -5.2 && rep.mean <= -4.6 && p < 1e-3)
                               : (rep.mean >= -9.9 && rep.mean <= -8.7 && p >= 0.1 && p <= 0.5);
      c.check(ok && elapsed < 60.0, fmt("%s h=%-5g mean %.4f  sd %.4f  p %.4g  %.1f s",
                                       std::string(method_name(m)).c_str(), h, rep.mean, rep.std_dev, p, elapsed));
    }
  }
  // Diagnostics: the finite-difference estimand in closed form, the p a
  // sample mean sitting exactly on it would get, and a 1e5-sample estimate.
  for (double h : {0.1, 0.01}) {
    const double target = (bd_mean(0.1 + h, 100.0) - bd_mean(0.1, 100.0)) / h;
    for (Method m : {Method::Cfd, Method::Crp}) {
      const auto big = fixed(request(bd, "theta2", "S", 100.0, m, 450 + seed++, h), 100'000);
      const double p_at_target = confidence_level(target, big.std_dev * std::sqrt(10.0), kBirthDeath100);
      c.info(fmt("%s h=%-5g closed-form S_h %.4f  N=1e5 mean %.4f +- %.4f  p(mean = S_h, N=1e4) %.3f",
                 std::string(method_name(m)).c_str(), h, target, big.mean, big.std_dev, p_at_target));
    }
  }
  return c;
}

Criterion coupled_difference() {
  Criterion c{5, "coupled difference matches truncated-CTMC D_theta within 4 standard errors (< 2 min)"};
  const auto start = Clock::now();
  const auto bd = load_builtin("birth-death");
  const auto gene = load_builtin("gene-expression");
  std::uint64_t seed = 500;
  auto run_model = [&](const ReactionNetwork& net, const std::string& f, const std::vector<Count>& max_count,
                       double max_t, std::uint64_t triple_seed) {
    const OutputFunction out = parse_output(f, net);
    for (const auto& [x, k, t] : testing::random_triples(net, max_count, max_t, 5, triple_seed)) {
      const auto r = testing::coupled_vs_brute_force(net, out, x, k, t, 10'000, seed++);
      std::string xs;
      for (auto v : x) xs += std::to_string(v) + " ";
      c.check(r.agrees(), fmt("%-16s x=(%s) k=%zu t=%.2f  mean %.5f  se %.5f  exact %.5f", f == "S" ? "birth-death" : "gene",
                              xs.c_str(), k, t, r.empirical, r.se, r.exact));
    }
  };
  run_model(bd, "S", {30}, 20.0, 51);
  run_model(gene, "P", {8, 60}, 8.0, 52);
  const double elapsed = seconds_since(start);
  c.check(elapsed < 120.0, fmt("runtime %.1f s", elapsed));
  return c;
}

Criterion marginals() {
  Criterion c{6, "CRP and CFD marginals match plain SSA (two-sample KS at 1%, birth-death T=20)"};
  const auto net = load_builtin("birth-death");
  const double h = 0.1;
  const Kinetics nominal(net);
  const Kinetics perturbed(net.with_param("theta2", 0.1 + h));
  const std::size_t n = 10'000;
  std::vector<double> ssa0(n), ssa1(n), crp0(n), crp1(n), cfd0(n), cfd1(n);
  for (std::size_t i = 0; i < n; ++i) {
    RngStream a(601, i), b(602, i), r1(603, i), r2(604, i);
    ssa0[i] = static_cast<double>(simulate_terminal(nominal, State{0}, 20.0, a)[0]);
    ssa1[i] = static_cast<double>(simulate_terminal(perturbed, State{0}, 20.0, b)[0]);
    const auto crp = simulate_common_paths(perturbed, nominal, State{0}, 20.0, r1);
    const auto cfd = simulate_split_clock(perturbed, nominal, State{0}, State{0}, 20.0, r2);
    crp1[i] = static_cast<double>(crp.z1[0]);
    crp0[i] = static_cast<double>(crp.z2[0]);
    cfd1[i] = static_cast<double>(cfd.z1[0]);
    cfd0[i] = static_cast<double>(cfd.z2[0]);
  }
  auto ks = [&](const char* name, const std::vector<double>& ssa, const std::vector<double>& coupled) {
    const auto r = testing::ks_two_sample(ssa, coupled);
    c.check(r.p > 0.01, fmt("%-26s D=%.4f  p=%.3f", name, r.d, r.p));
  };
  ks("CRP nominal marginal", ssa0, crp0);
  ks("CRP perturbed marginal", ssa1, crp1);
  ks("CFD nominal marginal", ssa0, cfd0);
  ks("CFD perturbed marginal", ssa1, cfd1);
  return c;
}

Criterion poisson() {
  Criterion c{7, "Poisson sampler passes chi-square at 1% for r in {0.5, 3, 20}; r = 0 gives 0"};
  std::uint64_t seed = 701;
  for (double r : {0.5, 3.0, 20.0}) {
    const auto res = testing::poisson_chi_square(testing::poisson_draws(r, 100'000, seed++), r);
    c.check(res.p > 0.01, fmt("r=%-4g chi2 %.2f  dof %d  p %.3f", r, res.statistic, res.dof, res.p));
  }
  const auto zeros = testing::poisson_draws(0.0, 100'000, seed);
  c.check(std::all_of(zeros.begin(), zeros.end(), [](auto k) { return k == 0; }), "r=0 returned 0 in 1e5 draws");
  return c;
}

Criterion derivatives() {
  Criterion c{8, "symbolic propensity derivatives agree with finite differences (rel <= 1e-5)"};
  const auto r = testing::check_builtin_derivatives(50, 801);
  c.check(r.worst_rel <= 1e-5,
          fmt("%zu comparisons, worst rel %.3g (%s)", r.comparisons, r.worst_rel, r.worst_case.c_str()));
  c.check(r.zero_limit_failures == 0,
          fmt("%zu states at the 0^beta ln 0 limit, %zu nonzero", r.zero_limit, r.zero_limit_failures));
  return c;
}

Criterion references() {
  Criterion c{9, "PPA at N=500 within 4 sd of the circadian and toggle-switch references (< 15 min)"};
  const auto start = Clock::now();
  const auto clock = load_builtin("circadian-clock");
  const auto toggle = load_builtin("toggle-switch");
  std::uint64_t seed = 901;
  for (const auto& [param, ref] : std::vector<std::pair<std::string, double>>{{"theta5", -240.368}, {"theta12", 1469.81}})
    unbiased_case(c, "circadian " + param + " T=5", request(clock, param, "S4", 5.0, Method::Ppa, seed++), 500, ref,
                  1e9);
  for (const auto& [param, ref] : std::vector<std::pair<std::string, double>>{
           {"alpha1", 1.19}, {"alpha2", -2.107}, {"beta", -5.9571}, {"gamma", 54.7495}})
    unbiased_case(c, "toggle " + param + " T=10", request(toggle, param, "U", 10.0, Method::Ppa, seed++), 500, ref,
                  1e9);
  const double elapsed = seconds_since(start);
  c.check(elapsed < 900.0, fmt("runtime %.1f s", elapsed));
  return c;
}

std::string cli_output(std::vector<std::string> args) {
  args.insert(args.begin(), "srnsens");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return std::to_string(code) + "\n" + out.str();
}

Criterion determinism() {
  Criterion c{10, "identical seed gives byte-identical JSON/CSV output for any --threads value"};
  const std::vector<std::vector<std::string>> cases{
      {"estimate", "--model", "builtin:birth-death", "--param", "theta2", "--f", "S", "--T", "20", "--method",
       "ppa", "--n", "4000"},
      {"estimate", "--model", "builtin:gene-expression", "--param", "theta4", "--f", "P", "--T", "20", "--method",
       "girsanov", "--n", "500"},
      {"estimate", "--model", "builtin:birth-death", "--param", "theta2", "--f", "S", "--T", "100", "--method",
       "crp", "--h", "0.01", "--n", "2000"},
      {"estimate", "--model", "builtin:toggle-switch", "--param", "gamma", "--f", "U", "--T", "10", "--method",
       "cfd", "--h", "0.1", "--n", "300"},
      {"estimate", "--model", "builtin:birth-death", "--param", "theta2", "--f", "S", "--T", "20", "--target-p",
       "0.95", "--ref", "oracle"},
  };
  for (const auto& base : cases) {
    for (const std::string format : {"json", "csv"}) {
      auto args = base;
      for (const char* a : {"--seed", "7", "--no-timing", "--format"}) args.push_back(a);
      args.push_back(format);
      const auto with_threads = [&](int t) {
        auto a = args;
        a.push_back("--threads");
        a.push_back(std::to_string(t));
        return cli_output(a);
      };
      const std::string reference = with_threads(1);
      bool same = reference.rfind("0\n", 0) == 0;
      for (int t : {1, 2, 3, 8}) same = same && with_threads(t) == reference;
      const std::string method = base[9] == "--method" ? base[10] : "adaptive";
      c.check(same, fmt("%-16s %-8s %-6s threads 1,1,2,3,8 identical", base[2].substr(8).c_str(), method.c_str(),
                        format.c_str()));
    }
  }
  return c;
}

Criterion m0_insensitivity() {
  Criterion c{11, "PPA means under M0 = 5 and M0 = 20 agree within 4 combined standard errors"};
  const auto bd = load_builtin("birth-death");
  std::uint64_t seed = 1101;
  for (double T : {20.0, 100.0}) {
    auto a = request(bd, "theta2", "S", T, Method::Ppa, seed++);
    a.m0 = 5;
    auto b = request(bd, "theta2", "S", T, Method::Ppa, seed++);
    b.m0 = 20;
    const auto ra = fixed(a, 10'000);
    const auto rb = fixed(b, 10'000);
    const double combined = std::hypot(ra.std_dev, rb.std_dev);
    const double z = std::abs(ra.mean - rb.mean) / combined;
    c.check(z <= 4.0, fmt("T=%-4g M0=5 %.5f (aux %.2f)  M0=20 %.5f (aux %.2f)  |z|=%.2f", T, ra.mean,
                          ra.mean_aux_paths, rb.mean, rb.mean_aux_paths, z));
  }
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Criterion()>> criteria{affine_oracle, ppa_unbiased, girsanov,    pitfalls,
                                                         coupled_difference, marginals, poisson, derivatives,
                                                         references, determinism, m0_insensitivity};
  // Usage: acceptance [--known-failure N]... [N]...
  // Positional numbers select criteria (default: all). A known failure still
  // prints FAIL but does not change the exit status.
  std::set<int> selected, known;
  for (int a = 1; a < argc; ++a) {
    const std::string arg = argv[a];
    if (arg == "--known-failure" && a + 1 < argc)
      known.insert(std::stoi(argv[++a]));
    else
      selected.insert(std::stoi(arg));
  }
  std::printf("acceptance suite, %d thread(s)\n", kThreads);
  int passed = 0, run = 0;
  std::vector<int> failed;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    ++run;
    const auto start = Clock::now();
    Criterion c{id, "(aborted)"};
    try {
      c = criteria[i]();
    } catch (const std::exception& e) {
      c.pass = false;
      c.details.push_back(std::string("error: ") + e.what());
    }
    for (const auto& d : c.details) std::printf("      %s\n", d.c_str());
    std::printf("%s [%d] %s (%.1f s)\n", c.pass ? "PASS" : "FAIL", c.id, c.title.c_str(), seconds_since(start));
    std::fflush(stdout);
    if (c.pass)
      ++passed;
    else
      failed.push_back(id);
  }
  std::printf("%d of %d criteria passed\n", passed, run);
  bool unexpected = false;
  for (int id : failed) {
    const bool is_known = known.count(id) > 0;
    unexpected = unexpected || !is_known;
    std::printf("criterion %d failed%s\n", id, is_known ? " (listed as a known failure)" : "");
  }
  return unexpected ? 1 : 0;
}
