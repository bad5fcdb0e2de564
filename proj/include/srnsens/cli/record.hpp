#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

namespace srn {

/// One result row: a flattened estimate report plus the case identifiers.
struct ResultRecord {
  std::string model;
  std::string param;
  double T = 0.0;
  std::string method;
  std::optional<double> h;
  std::uint64_t n = 0;
  double mean = 0.0;
  double std_dev = 0.0;
  std::optional<double> p;
  double elapsed_s = 0.0;
  std::uint64_t seed = 0;

  friend bool operator==(const ResultRecord&, const ResultRecord&) = default;
};

/// "model,param,T,method,h,N,mean,std_dev,p,elapsed_s,seed"
std::string csv_header();
/// Numbers use the shortest round-trip form; absent h or p are empty fields.
std::string to_csv_row(const ResultRecord& r);
/// Throws ValidationError on a malformed row.
ResultRecord from_csv_row(std::string_view line);

nlohmann::ordered_json to_json(const ResultRecord& r);
ResultRecord record_from_json(const nlohmann::json& j);

/// Shortest decimal string that parses back to exactly v.
std::string format_double(double v);

}  // namespace srn
