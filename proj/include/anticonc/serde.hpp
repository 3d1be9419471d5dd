// JSON configuration parsing for marginals, diagonals, and inference
// scenarios, CSV knot input for tabulated diagonals, and a small JSON
// writer that emits floating-point values with 17 significant digits
// (infinities become the strings "inf"/"-inf").
#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "anticonc/archimedean.hpp"
#include "anticonc/diagonals.hpp"
#include "anticonc/inference.hpp"
#include "anticonc/marginals.hpp"

namespace anticonc {

using json = nlohmann::json;

// Configuration error carrying the offending field, so the CLI can name it
// in the diagnostic.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error("config error at '" + field + "': " + message),
        field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

namespace detail {

inline const json& get_field(const json& j, const char* field) {
  if (!j.is_object() || !j.contains(field)) {
    throw ConfigError(field, "missing required field");
  }
  return j.at(field);
}

inline double get_number(const json& j, const char* field) {
  const json& v = get_field(j, field);
  if (!v.is_number()) throw ConfigError(field, "expected a number");
  return v.get<double>();
}

inline double get_number_or(const json& j, const char* field, double fallback) {
  if (!j.is_object() || !j.contains(field)) return fallback;
  if (!j.at(field).is_number()) throw ConfigError(field, "expected a number");
  return j.at(field).get<double>();
}

inline int get_int(const json& j, const char* field) {
  const json& v = get_field(j, field);
  if (!v.is_number_integer()) throw ConfigError(field, "expected an integer");
  return v.get<int>();
}

inline std::string get_string(const json& j, const char* field) {
  const json& v = get_field(j, field);
  if (!v.is_string()) throw ConfigError(field, "expected a string");
  return v.get<std::string>();
}

inline std::vector<double> get_number_array(const json& j, const char* field) {
  const json& v = get_field(j, field);
  if (!v.is_array()) throw ConfigError(field, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const json& e : v) {
    if (!e.is_number()) throw ConfigError(field, "expected an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

}  // namespace detail

inline MarginalDistribution parse_marginal(const json& j) {
  const std::string family = detail::get_string(j, "family");
  if (family == "uniform01") return MarginalDistribution::uniform01();
  if (family == "gaussian") {
    return MarginalDistribution::gaussian(detail::get_number_or(j, "mu", 0.0),
                                          detail::get_number_or(j, "sigma", 1.0));
  }
  if (family == "weibull") {
    return MarginalDistribution::weibull(detail::get_number(j, "alpha"),
                                         detail::get_number(j, "lambda"));
  }
  if (family == "reverse_gumbel") {
    return MarginalDistribution::reverse_gumbel(detail::get_number(j, "lambda"));
  }
  if (family == "pareto") {
    return MarginalDistribution::pareto(detail::get_number(j, "alpha"),
                                        detail::get_number(j, "lambda"));
  }
  if (family == "gamma") {
    return MarginalDistribution::gamma(detail::get_number(j, "alpha"),
                                       detail::get_number(j, "lambda"));
  }
  if (family == "gaussian_mixture") {
    return MarginalDistribution::gaussian_mixture(detail::get_number_array(j, "p"),
                                                  detail::get_number_array(j, "sigma"));
  }
  throw ConfigError("family", "unknown marginal family '" + family + "'");
}

// CSV of "t,value" rows; blank lines and lines starting with '#' are
// skipped, and a single non-numeric header row is tolerated.
inline std::vector<std::pair<double, double>> read_knots_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("csv", "cannot open knot file '" + path + "'");
  std::vector<std::pair<double, double>> knots;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::istringstream row(line);
    std::string t_str, v_str;
    if (!std::getline(row, t_str, ',') || !std::getline(row, v_str)) {
      throw ConfigError("csv", "line " + std::to_string(line_no) +
                                   " of '" + path + "' is not 't,value'");
    }
    try {
      knots.emplace_back(std::stod(t_str), std::stod(v_str));
    } catch (const std::exception&) {
      if (line_no == 1) continue;  // header row
      throw ConfigError("csv", "line " + std::to_string(line_no) +
                                   " of '" + path + "' is not numeric");
    }
  }
  return knots;
}

inline ArchimedeanGenerator parse_generator(const json& j) {
  const std::string family = detail::get_string(j, "family");
  if (family == "clayton") return ArchimedeanGenerator::clayton(detail::get_number(j, "theta"));
  if (family == "frank") return ArchimedeanGenerator::frank(detail::get_number(j, "theta"));
  if (family == "gumbel_hougaard") {
    return ArchimedeanGenerator::gumbel_hougaard(detail::get_number(j, "theta"));
  }
  if (family == "exp_counterexample") return ArchimedeanGenerator::exp_counterexample();
  throw ConfigError("family", "unknown Archimedean family '" + family + "'");
}

inline DiagonalSection parse_diagonal(const json& j) {
  const std::string kind = detail::get_string(j, "kind");
  if (kind == "mixture") {
    const json& comps = detail::get_field(j, "components");
    if (!comps.is_array() || comps.empty()) {
      throw ConfigError("components", "expected a nonempty array of diagonals");
    }
    std::vector<DiagonalSection> components;
    components.reserve(comps.size());
    for (const json& c : comps) components.push_back(parse_diagonal(c));
    return DiagonalSection::mixture(detail::get_number_array(j, "weights"),
                                    std::move(components));
  }

  const int d = detail::get_int(j, "d");
  if (kind == "independence") return DiagonalSection::independence(d);
  if (kind == "frechet_upper") return DiagonalSection::frechet_upper(d);
  if (kind == "frechet_lower") return DiagonalSection::frechet_lower(d);
  if (kind == "delta_up") return DiagonalSection::upper_envelope(d, detail::get_number(j, "u"));
  if (kind == "delta_lo") return DiagonalSection::lower_envelope(d, detail::get_number(j, "u"));
  if (kind == "delta_convex_max") {
    return DiagonalSection::convex_envelope(d, detail::get_number(j, "u"));
  }
  if (kind == "archimedean") return DiagonalSection::archimedean(d, parse_generator(j));
  if (kind == "gaussian_equicorr") {
    return DiagonalSection::gaussian_equicorr(d, detail::get_number(j, "rho"));
  }
  if (kind == "tabulated") {
    std::vector<std::pair<double, double>> knots;
    if (j.contains("csv")) {
      knots = read_knots_csv(detail::get_string(j, "csv"));
    } else {
      const json& arr = detail::get_field(j, "knots");
      if (!arr.is_array()) throw ConfigError("knots", "expected an array of [t, value] pairs");
      for (const json& k : arr) {
        if (!k.is_array() || k.size() != 2 || !k[0].is_number() || !k[1].is_number()) {
          throw ConfigError("knots", "expected an array of [t, value] pairs");
        }
        knots.emplace_back(k[0].get<double>(), k[1].get<double>());
      }
    }
    return DiagonalSection::tabulated(d, std::move(knots));
  }
  throw ConfigError("kind", "unknown diagonal kind '" + kind + "'");
}

inline CouplingProfile parse_coupling(const json& j, const char* field = "coupling") {
  const json& arr = detail::get_field(j, field);
  if (!arr.is_array() || arr.empty()) {
    throw ConfigError(field, "expected a nonempty array of [epsilon, p] pairs");
  }
  std::vector<std::pair<double, double>> table;
  for (const json& row : arr) {
    if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number()) {
      throw ConfigError(field, "expected an array of [epsilon, p] pairs");
    }
    table.emplace_back(row[0].get<double>(), row[1].get<double>());
  }
  return CouplingProfile::from_table(std::move(table));
}

inline InferenceScenario parse_scenario(const json& j) {
  InferenceScenario scenario{
      parse_diagonal(detail::get_field(j, "diagonal")),
      parse_marginal(detail::get_field(j, "marginal")),
      detail::get_number(j, "alpha"),
      parse_coupling(j),
      detail::get_number_array(j, "eps_grid"),
  };
  if (j.contains("mode")) {
    const std::string mode = detail::get_string(j, "mode");
    if (mode == "exact") {
      scenario.mode = AntiConcentrationMode::ExactDiagonal;
    } else if (mode == "convex-class") {
      scenario.mode = AntiConcentrationMode::ConvexClassBound;
    } else {
      throw ConfigError("mode", "expected 'exact' or 'convex-class'");
    }
  }
  return scenario;
}

// ---------------------------------------------------------------------------
// Output formatting
// ---------------------------------------------------------------------------

// %.17g round-trips every double; infinities and NaNs are not valid JSON
// numbers and are emitted as strings instead.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "\"nan\"";
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Bare numeric formatting for CSV cells (no quoting of infinities).
inline std::string format_double_csv(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Minimal streaming JSON writer; keeps output deterministic and the float
// format under our control.
class JsonWriter {
 public:
  JsonWriter& begin_object() {
    prefix();
    out_ += '{';
    stack_.push_back(false);
    return *this;
  }
  JsonWriter& end_object() {
    out_ += '}';
    stack_.pop_back();
    return *this;
  }
  JsonWriter& begin_array() {
    prefix();
    out_ += '[';
    stack_.push_back(false);
    return *this;
  }
  JsonWriter& end_array() {
    out_ += ']';
    stack_.pop_back();
    return *this;
  }
  JsonWriter& key(std::string_view k) {
    prefix();
    append_string(k);
    out_ += ':';
    pending_value_ = true;
    return *this;
  }
  JsonWriter& value(double v) {
    prefix();
    out_ += format_double(v);
    return *this;
  }
  JsonWriter& value(std::int64_t v) {
    prefix();
    out_ += std::to_string(v);
    return *this;
  }
  JsonWriter& value(std::uint64_t v) {
    prefix();
    out_ += std::to_string(v);
    return *this;
  }
  JsonWriter& value(int v) { return value(static_cast<std::int64_t>(v)); }
  JsonWriter& value(bool v) {
    prefix();
    out_ += v ? "true" : "false";
    return *this;
  }
  JsonWriter& value(std::string_view v) {
    prefix();
    append_string(v);
    return *this;
  }
  JsonWriter& value(const char* v) { return value(std::string_view(v)); }

  const std::string& str() const { return out_; }

 private:
  void prefix() {
    if (pending_value_) {
      pending_value_ = false;
      return;
    }
    if (!stack_.empty()) {
      if (stack_.back()) out_ += ',';
      stack_.back() = true;
    }
  }

  void append_string(std::string_view s) {
    out_ += '"';
    for (char c : s) {
      switch (c) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\t': out_ += "\\t"; break;
        case '\r': out_ += "\\r"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "\\u%04x", c);
            out_ += buf;
          } else {
            out_ += c;
          }
      }
    }
    out_ += '"';
  }

  std::string out_;
  std::vector<bool> stack_;
  bool pending_value_ = false;
};

}  // namespace anticonc
