#include "srnsens/cli/suite.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "srnsens/error.hpp"
#include "srnsens/model/builtin.hpp"
#include "srnsens/model/parser.hpp"
#include "srnsens/oracle/affine.hpp"

namespace srn {

namespace {

BenchmarkCase make_case(std::string model, std::string param, std::string f, double T, Method method,
                        std::optional<double> ref = std::nullopt) {
  BenchmarkCase c;
  c.model = std::move(model);
  c.param = std::move(param);
  c.f = std::move(f);
  c.T = T;
  c.method = method;
  c.ref = ref;
  return c;
}

BenchmarkSuite paper_suite() {
  BenchmarkSuite s;
  const Method all[] = {Method::Girsanov, Method::Ppa, Method::Cfd, Method::Crp};
  for (double T : {20.0, 100.0})
    for (Method m : all) s.cases.push_back(make_case("builtin:birth-death", "theta2", "S", T, m));
  for (double theta : {0.0693, 0.0023, 0.0})
    for (double T : {20.0, 100.0})
      for (Method m : all) {
        if (m == Method::Girsanov && theta == 0.0) continue;
        auto c = make_case("builtin:gene-expression", "theta4", "P", T, m);
        c.set.emplace_back("theta4", theta);
        s.cases.push_back(std::move(c));
      }
  const std::pair<const char*, double> clock[] = {
      {"theta5", -240.368}, {"theta6", 47.0746}, {"theta8", -127.629}, {"theta12", 1469.81}, {"theta14", 0.1424}};
  for (const auto& [param, ref] : clock)
    for (Method m : all) s.cases.push_back(make_case("builtin:circadian-clock", param, "S4", 5.0, m, ref));
  const std::pair<const char*, double> toggle[] = {
      {"alpha1", 1.19}, {"alpha2", -2.107}, {"beta", -5.9571}, {"gamma", 54.7495}};
  for (const auto& [param, ref] : toggle)
    for (Method m : all) s.cases.push_back(make_case("builtin:toggle-switch", param, "U", 10.0, m, ref));
  return s;
}

BenchmarkSuite pitfalls_suite() {
  BenchmarkSuite s;
  for (Method m : {Method::Cfd, Method::Crp}) {
    auto c = make_case("builtin:birth-death", "theta2", "S", 100.0, m);
    c.h_schedule = {0.1, 0.01};
    c.n = 10'000;
    s.cases.push_back(std::move(c));
  }
  return s;
}

ReactionNetwork case_network(const BenchmarkCase& c) {
  ReactionNetwork net = load_model(c.model);
  for (const auto& [id, value] : c.set) {
    if (net.find_param(id))
      net = net.with_param(id, value);
    else if (value >= 0 && value == std::floor(value))
      net = net.with_initial(id, static_cast<Count>(value));
    else
      throw ValidationError("'" + id + "' is neither a parameter nor a species with a valid count");
  }
  return net;
}

double case_reference(const BenchmarkCase& c, const ReactionNetwork& net, const OutputFunction& f) {
  if (c.ref) return *c.ref;
  return exact_sensitivity_affine(net, c.param, f, c.T);
}

std::uint64_t scaled(std::uint64_t n, double scale, std::uint64_t floor) {
  return std::max<std::uint64_t>(floor, static_cast<std::uint64_t>(std::llround(static_cast<double>(n) * scale)));
}

}  // namespace

BenchmarkSuite builtin_suite(std::string_view name) {
  if (name == "paper") return paper_suite();
  if (name == "pitfalls") return pitfalls_suite();
  throw ValidationError("unknown built-in suite '" + std::string(name) + "' (available: paper, pitfalls)");
}

BenchmarkSuite parse_suite(const nlohmann::json& j) {
  try {
    BenchmarkSuite s;
    if (!j.is_object()) throw ValidationError("suite must be a JSON object");
    s.scale = j.value("scale", 1.0);
    if (!(s.scale > 0.0 && s.scale <= 1.0)) throw ValidationError("suite scale must lie in (0, 1]");
    if (!j.contains("cases") || !j["cases"].is_array() || j["cases"].empty())
      throw ValidationError("suite has no cases");
    for (const auto& jc : j["cases"]) {
      BenchmarkCase c;
      c.model = jc.at("model").get<std::string>();
      c.param = jc.at("param").get<std::string>();
      c.f = jc.at("f").get<std::string>();
      c.T = jc.at("T").get<double>();
      const auto method = parse_method(jc.at("method").get<std::string>());
      if (!method) throw ValidationError("unknown method '" + jc["method"].get<std::string>() + "'");
      c.method = *method;
      c.target_p = jc.value("target_p", 0.95);
      if (jc.contains("h_schedule")) c.h_schedule = jc["h_schedule"].get<std::vector<double>>();
      if (jc.contains("n")) c.n = jc["n"].get<std::uint64_t>();
      c.n_max = jc.value("n_max", c.n_max);
      if (jc.contains("set"))
        for (const auto& [id, v] : jc["set"].items()) c.set.emplace_back(id, v.get<double>());
      if (jc.contains("ref") && jc["ref"].is_number()) {
        c.ref = jc["ref"].get<double>();
      } else if (jc.contains("ref") && jc["ref"] != "oracle") {
        throw ValidationError("case ref must be a number or \"oracle\"");
      }
      s.cases.push_back(std::move(c));
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed suite: ") + e.what());
  }
}

BenchmarkSuite load_suite_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open suite file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("suite file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_suite(j);
}

void validate_suite(const BenchmarkSuite& suite) {
  if (suite.cases.empty()) throw ValidationError("suite has no cases");
  if (!(suite.scale > 0.0 && suite.scale <= 1.0)) throw ValidationError("suite scale must lie in (0, 1]");
  for (const auto& c : suite.cases) {
    const ReactionNetwork net = case_network(c);
    net.param_index(c.param);
    const OutputFunction f = parse_output(c.f, net);
    if (is_finite_difference(c.method) && c.h_schedule.empty())
      throw ValidationError("finite-difference case needs a non-empty h schedule");
    if (!c.ref) exact_sensitivity_affine(net, c.param, f, c.T);
  }
}

CaseOutcome run_case(const BenchmarkCase& c, double scale, const BenchmarkOptions& options) {
  const ReactionNetwork net = case_network(c);
  const OutputFunction f = parse_output(c.f, net);
  const double ref = case_reference(c, net, f);

  SensitivityRequest req{net, c.param, f, c.T, c.method};
  req.seed = options.seed;
  AdaptivePolicy policy;
  policy.target_p = c.target_p;
  policy.n_max = scaled(c.n_max, scale, policy.initial_batch);

  auto record = [&](const EstimateReport& r) {
    ResultRecord row;
    row.model = c.model;
    row.param = c.param;
    row.T = c.T;
    row.method = std::string(method_name(c.method));
    row.h = r.h;
    row.n = r.n;
    row.mean = r.mean;
    row.std_dev = r.std_dev;
    row.p = r.p;
    row.elapsed_s = options.timing ? r.elapsed_s : 0.0;
    row.seed = r.seed;
    return row;
  };

  CaseOutcome out;
  const std::vector<std::optional<double>> steps = [&] {
    std::vector<std::optional<double>> v;
    if (is_finite_difference(c.method))
      for (double h : c.h_schedule) v.emplace_back(h);
    else
      v.emplace_back(std::nullopt);
    return v;
  }();

  if (c.n) {
    for (const auto& h : steps) {
      req.h = h;
      out.rows.push_back(record(run_fixed(req, scaled(*c.n, scale, 2), ref, options.run)));
    }
    return out;
  }
  std::optional<ResultRecord> last;
  for (const auto& h : steps) {
    req.h = h;
    const EstimateReport r = run_adaptive(req, policy, ref, options.run);
    last = record(r);
    if (r.target_met.value_or(false)) {
      out.rows.push_back(*last);
      return out;
    }
  }
  out.target_met = false;
  out.rows.push_back(*last);
  return out;
}

}  // namespace srn
