#pragma once

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bethe/branching.hpp"
#include "bethe/error.hpp"
#include "bethe/measure.hpp"
#include "bethe/polynomial.hpp"
#include "bethe/spectra.hpp"

namespace bethe {

using Json = nlohmann::ordered_json;

// %.17g, enough digits to round-trip a double.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw SpecError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw SpecError("not a number: '" + s + "'");
  return v;
}

// ---------------------------------------------------------------------------
// Specs and polynomials.

inline Json spec_to_json(const BranchingSpec& spec) {
  Json j;
  j["family"] = spec.family_name();
  if (spec.is<Periodic>())
    j["alphas"] = spec.as<Periodic>().alphas;
  else if (spec.is<Sequence>())
    j["alphas"] = spec.as<Sequence>().alphas;
  else
    j["k"] = spec.k();
  if (spec.is<Fan>()) j["d"] = spec.as<Fan>().d;
  return j;
}

inline BranchingSpec spec_from_json(const Json& j) {
  try {
    const std::string f = j.at("family").get<std::string>();
    if (f == "constant") return BranchingSpec::constant(j.at("k").get<int>());
    if (f == "hat") return BranchingSpec::hat(j.at("k").get<int>());
    if (f == "periodic") return BranchingSpec::periodic(j.at("alphas").get<std::vector<int>>());
    if (f == "sequence") return BranchingSpec::sequence(j.at("alphas").get<std::vector<int>>());
    if (f == "fan") return BranchingSpec::fan(j.at("k").get<int>(), j.at("d").get<int>());
    throw SpecError("unknown family '" + f + "'");
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("malformed spec: ") + e.what());
  }
}

// Coefficients lowest degree first, as decimal strings.
inline Json polynomial_to_json(const Polynomial& p) {
  Json j = Json::array();
  for (const auto& c : p.coeffs()) j.push_back(c.str());
  return j;
}

inline Polynomial polynomial_from_json(const Json& j) {
  if (!j.is_array()) throw SpecError("polynomial JSON must be an array");
  std::vector<BigInt> c;
  for (const auto& v : j) {
    if (!v.is_string()) throw SpecError("polynomial coefficients must be decimal strings");
    try {
      c.emplace_back(v.get<std::string>());
    } catch (const std::exception&) {
      throw SpecError("bad coefficient '" + v.get<std::string>() + "'");
    }
  }
  return Polynomial(std::move(c));
}

// ---------------------------------------------------------------------------
// Spectrum reports.

inline Json spectrum_to_json(const SpectrumReport& r) {
  Json j;
  j["spec"] = spec_to_json(r.spec);
  j["depth"] = r.depth;
  j["operator"] = to_string(r.op);
  j["total_dim"] = r.total_dim;
  Json entries = Json::array();
  for (const auto& e : r.entries)
    entries.push_back({{"value", e.value},
                       {"mult", e.multiplicity},
                       {"first_index", e.source.first_index},
                       {"poly_index", e.source.poly_index},
                       {"family", e.source.family_label}});
  j["entries"] = std::move(entries);
  return j;
}

inline SpectrumReport spectrum_from_json(const Json& j) {
  try {
    SpectrumReport r{spec_from_json(j.at("spec")), j.at("depth").get<int>(),
                     parse_operator(j.at("operator").get<std::string>()), j.at("total_dim").get<std::int64_t>(), {}};
    for (const auto& e : j.at("entries"))
      r.entries.push_back({e.at("value").get<double>(), e.at("mult").get<std::int64_t>(),
                           {e.value("family", std::string{}), e.value("poly_index", 0), e.at("first_index").get<int>()}});
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("malformed spectrum JSON: ") + e.what());
  }
}

// Columns: value,mult,first_index
inline void write_spectrum_csv(std::ostream& os, const SpectrumReport& r) {
  os << "value,mult,first_index\n";
  for (const auto& e : r.entries) os << format_double(e.value) << ',' << e.multiplicity << ',' << e.source.first_index << '\n';
}

struct SpectrumCsvRow {
  double value = 0;
  std::int64_t mult = 0;
  int first_index = 0;
};

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

inline std::vector<std::vector<std::string>> read_csv(std::istream& is, const std::string& header) {
  std::string line;
  if (!std::getline(is, line) || line != header) throw SpecError("CSV header must be '" + header + "'");
  const auto width = split_csv(header).size();
  std::vector<std::vector<std::string>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto cells = split_csv(line);
    if (cells.size() != width) throw SpecError("CSV row has " + std::to_string(cells.size()) + " cells: '" + line + "'");
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace detail

inline std::vector<SpectrumCsvRow> read_spectrum_csv(std::istream& is) {
  std::vector<SpectrumCsvRow> out;
  for (const auto& c : detail::read_csv(is, "value,mult,first_index"))
    out.push_back({parse_double(c[0]), std::stoll(c[1]), std::stoi(c[2])});
  return out;
}

// ---------------------------------------------------------------------------
// Staircases and endpoints.

// Columns: x,cumulative
inline void write_cdf_csv(std::ostream& os, const StaircaseCDF& c) {
  os << "x,cumulative\n";
  for (std::size_t i = 0; i < c.points.size(); ++i) os << format_double(c.points[i].x) << ',' << format_double(c.cumulative[i]) << '\n';
}

inline std::vector<std::pair<double, double>> read_cdf_csv(std::istream& is) {
  std::vector<std::pair<double, double>> out;
  for (const auto& c : detail::read_csv(is, "x,cumulative")) out.emplace_back(parse_double(c[0]), parse_double(c[1]));
  return out;
}

inline Json cdf_to_json(const StaircaseCDF& c) {
  Json j;
  j["kind"] = c.kind == StaircaseCDF::Kind::Empirical ? "empirical" : "limiting";
  j["scheme"] = to_string(c.scheme);
  if (c.kind == StaircaseCDF::Kind::Empirical)
    j["depth"] = c.depth;
  else
    j["truncation"] = c.truncation;
  j["tail_bound"] = c.tail_bound;
  Json pts = Json::array();
  for (std::size_t i = 0; i < c.points.size(); ++i)
    pts.push_back({{"x", c.points[i].x}, {"weight", c.points[i].weight}, {"cumulative", c.cumulative[i]}});
  j["points"] = std::move(pts);
  return j;
}

inline Json endpoints_to_json(const std::vector<EndpointRecord>& recs) {
  Json j = Json::array();
  for (const auto& e : recs)
    j.push_back({{"m", e.m}, {"a", e.a}, {"left", e.left}, {"right", e.right}, {"width", e.width}, {"tail_bound", e.tail_bound}});
  return j;
}

inline std::vector<EndpointRecord> endpoints_from_json(const Json& j) {
  try {
    std::vector<EndpointRecord> out;
    for (const auto& e : j)
      out.push_back({e.at("m").get<int>(), e.at("a").get<int>(), e.at("left").get<double>(), e.at("right").get<double>(),
                     e.at("width").get<double>(), e.at("tail_bound").get<double>()});
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("malformed endpoint JSON: ") + e.what());
  }
}

}  // namespace bethe
