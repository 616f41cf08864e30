#include "bellcc/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "bellcc/errors.hpp"

namespace bellcc::io {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string location(const std::string& text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

Json parse_object(const std::string& text, const std::string& source) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // e.byte is one past the offending character.
    throw ParseError(source + ": syntax error at " + location(text, e.byte > 0 ? e.byte - 1 : 0));
  }
  if (!j.is_object()) throw ParseError(source + ": expected a JSON object at the top level");
  return j;
}

int read_parties(const Json& j, const std::string& source) {
  if (!j.contains("n")) throw ParseError(source + ": missing field 'n'");
  const auto& n = j.at("n");
  if (!n.is_number_integer()) throw ParseError(source + ": field 'n' must be an integer");
  const auto value = n.get<long long>();
  if (value < 1 || value > 20) {
    throw ParseError(source + ": field 'n' = " + std::to_string(value) + " outside [1, 20]");
  }
  return static_cast<int>(value);
}

Json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double read_number(const Json& j, const char* field) {
  if (!j.contains(field)) throw ParseError(std::string("missing field '") + field + "'");
  const auto& v = j.at(field);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw ParseError(std::string("field '") + field + "' must be a number");
}

template <typename T>
T read_field(const Json& j, const char* field) {
  if (!j.contains(field)) throw ParseError(std::string("missing field '") + field + "'");
  try {
    return j.at(field).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError(std::string("field '") + field + "' has the wrong type");
  }
}

}  // namespace

ineq::GTable parse_g_table(const std::string& text, const std::string& source) {
  const Json j = parse_object(text, source);
  const int n = read_parties(j, source);
  if (!j.contains("values")) throw ParseError(source + ": missing field 'values'");
  const auto& values = j.at("values");
  if (!values.is_array()) throw ParseError(source + ": field 'values' must be an array");
  const std::size_t expected = std::size_t{1} << n;
  if (values.size() != expected) {
    throw ParseError(source + ": field 'values' has " + std::to_string(values.size()) +
                     " entries, expected 2^" + std::to_string(n) + " = " + std::to_string(expected));
  }
  std::vector<double> g(expected);
  for (std::size_t k = 0; k < expected; ++k) {
    if (!values[k].is_number()) {
      throw ParseError(source + ": field 'values[" + std::to_string(k) + "]' must be a number");
    }
    g[k] = values[k].get<double>();
  }
  try {
    return ineq::GTable(n, std::move(g));
  } catch (const std::invalid_argument& e) {
    throw ParseError(source + ": " + e.what());
  }
}

ineq::GTable load_g_table(const std::string& path) { return parse_g_table(read_file(path), path); }

Json g_table_json(const ineq::GTable& g) {
  Json j;
  j["n"] = g.parties();
  j["values"] = Json::array();
  for (double v : g.values()) j["values"].push_back(v);
  return j;
}

ineq::SignFunction parse_sign_function(const std::string& text, const std::string& source) {
  const Json j = parse_object(text, source);
  const int n = read_parties(j, source);
  if (!j.contains("mask") || !j.at("mask").is_string()) {
    throw ParseError(source + ": field 'mask' must be a hexadecimal string");
  }
  try {
    return ineq::SignFunction::from_hex(n, j.at("mask").get<std::string>());
  } catch (const ParseError& e) {
    throw ParseError(source + ": field 'mask': " + e.what());
  }
}

ineq::SignFunction load_sign_function(const std::string& path) {
  return parse_sign_function(read_file(path), path);
}

Json sign_function_json(const ineq::SignFunction& sign) {
  Json j;
  j["n"] = sign.parties();
  j["mask"] = sign.to_hex();
  return j;
}

Json strategy_json(const ineq::DeterministicStrategy& strategy) {
  Json j = Json::array();
  for (const auto& [a0, a1] : strategy.responses()) j.push_back(Json::array({a0, a1}));
  return j;
}

Json to_json(const ccp::SuccessReport& r) {
  Json j;
  j["classical_max"] = number(r.classical_max);
  j["quantum"] = number(r.quantum);
  j["advantage"] = r.advantage;
  j["bell_lhs"] = number(r.bell_lhs);
  j["bound"] = number(r.bound);
  return j;
}

ccp::SuccessReport success_report_from_json(const Json& j) {
  return {read_number(j, "classical_max"), read_number(j, "quantum"),
          read_field<bool>(j, "advantage"), read_number(j, "bell_lhs"), read_number(j, "bound")};
}

Json to_json(const mc::SimReport& r) {
  Json j;
  j["rounds"] = r.rounds;
  j["successes"] = r.successes;
  j["empirical_rate"] = number(r.empirical_rate);
  j["analytic_rate"] = number(r.analytic_rate);
  j["standard_error"] = number(r.standard_error);
  j["z_score"] = number(r.z_score);
  return j;
}

mc::SimReport sim_report_from_json(const Json& j) {
  return {read_field<std::uint64_t>(j, "rounds"), read_field<std::uint64_t>(j, "successes"),
          read_number(j, "empirical_rate"),       read_number(j, "analytic_rate"),
          read_number(j, "standard_error"),       read_number(j, "z_score")};
}

Json to_json(const continuum::ContinuumReport& r) {
  Json j;
  j["n"] = r.parties;
  j["m"] = r.grid_points;
  j["lhs"] = number(r.lhs);
  j["bound"] = number(r.bound);
  j["W"] = number(r.weight);
  j["classical_max"] = number(r.classical_max);
  j["quantum"] = number(r.quantum);
  j["advantage"] = r.advantage;
  return j;
}

continuum::ContinuumReport continuum_report_from_json(const Json& j) {
  return {read_field<int>(j, "n"),         read_field<int>(j, "m"),
          read_number(j, "lhs"),           read_number(j, "bound"),
          read_number(j, "W"),             read_number(j, "classical_max"),
          read_number(j, "quantum"),       read_field<bool>(j, "advantage")};
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

}  // namespace bellcc::io
