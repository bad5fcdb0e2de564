#include "srnsens/cli/record.hpp"

#include <charconv>
#include <vector>

#include "srnsens/error.hpp"

namespace srn {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back() += c;
    }
  }
  if (quoted) throw ValidationError("unterminated quote in CSV row");
  return fields;
}

double parse_double(const std::string& s, const char* column) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ValidationError(std::string("bad number in CSV column ") + column + ": '" + s + "'");
  return v;
}

std::uint64_t parse_uint(const std::string& s, const char* column) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ValidationError(std::string("bad integer in CSV column ") + column + ": '" + s + "'");
  return v;
}

std::optional<double> parse_optional(const std::string& s, const char* column) {
  if (s.empty()) return std::nullopt;
  return parse_double(s, column);
}

std::string optional_text(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::string csv_header() { return "model,param,T,method,h,N,mean,std_dev,p,elapsed_s,seed"; }

std::string to_csv_row(const ResultRecord& r) {
  std::string out;
  out += csv_field(r.model) + ',';
  out += csv_field(r.param) + ',';
  out += format_double(r.T) + ',';
  out += csv_field(r.method) + ',';
  out += optional_text(r.h) + ',';
  out += std::to_string(r.n) + ',';
  out += format_double(r.mean) + ',';
  out += format_double(r.std_dev) + ',';
  out += optional_text(r.p) + ',';
  out += format_double(r.elapsed_s) + ',';
  out += std::to_string(r.seed);
  return out;
}

ResultRecord from_csv_row(std::string_view line) {
  const auto f = split_csv(line);
  if (f.size() != 11) throw ValidationError("CSV row has " + std::to_string(f.size()) + " fields, expected 11");
  ResultRecord r;
  r.model = f[0];
  r.param = f[1];
  r.T = parse_double(f[2], "T");
  r.method = f[3];
  r.h = parse_optional(f[4], "h");
  r.n = parse_uint(f[5], "N");
  r.mean = parse_double(f[6], "mean");
  r.std_dev = parse_double(f[7], "std_dev");
  r.p = parse_optional(f[8], "p");
  r.elapsed_s = parse_double(f[9], "elapsed_s");
  r.seed = parse_uint(f[10], "seed");
  return r;
}

nlohmann::ordered_json to_json(const ResultRecord& r) {
  nlohmann::ordered_json j;
  j["model"] = r.model;
  j["param"] = r.param;
  j["T"] = r.T;
  j["method"] = r.method;
  j["h"] = r.h ? nlohmann::ordered_json(*r.h) : nlohmann::ordered_json(nullptr);
  j["N"] = r.n;
  j["mean"] = r.mean;
  j["std_dev"] = r.std_dev;
  j["p"] = r.p ? nlohmann::ordered_json(*r.p) : nlohmann::ordered_json(nullptr);
  j["elapsed_s"] = r.elapsed_s;
  j["seed"] = r.seed;
  return j;
}

ResultRecord record_from_json(const nlohmann::json& j) {
  try {
    ResultRecord r;
    r.model = j.at("model").get<std::string>();
    r.param = j.at("param").get<std::string>();
    r.T = j.at("T").get<double>();
    r.method = j.at("method").get<std::string>();
    if (j.contains("h") && !j["h"].is_null()) r.h = j["h"].get<double>();
    r.n = j.at("N").get<std::uint64_t>();
    r.mean = j.at("mean").get<double>();
    r.std_dev = j.at("std_dev").get<double>();
    if (j.contains("p") && !j["p"].is_null()) r.p = j["p"].get<double>();
    r.elapsed_s = j.at("elapsed_s").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed result record: ") + e.what());
  }
}

}  // namespace srn
