#pragma once

// Problem files: a ring, a distribution given by one-forms or by vector
// fields, chart denominators and options.
//
//   {
//     "name": "radii",
//     "ring": {"variables": ["x", "y"], "inverted": []},
//     "distribution": {"one_forms": [{"x": "-y", "y": "x"}]},
//     "charts": ["x", "y"],
//     "options": {"degree_bound": 2, "d_alg": 3, "samples": 200, "seed": 1}
//   }

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "folia/diffmod.hpp"
#include "folia/foliation.hpp"
#include "folia/parse.hpp"
#include "json.hpp"

namespace folia {

using Json = nlohmann::json;

/// Malformed input: bad JSON, schema violations, unparsable expressions.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  int degree_bound = 4;
  int d_alg = 3;
  int samples = 200;
  std::uint64_t seed = 1;
};

struct ProblemSpec {
  std::string name;
  RingPtr ring;
  Distribution dist;
  bool from_fields = false;
  std::vector<std::string> chart_text;
  std::vector<Poly> charts;
  Options options;
};

namespace detail {

inline Poly parse_at(const std::string& where, const std::string& text, const RingPtr& R) {
  try {
    return parse_poly(text, R);
  } catch (const ParseError& e) {
    throw InputError(where + ": " + e.what() + " in \"" + text + "\"");
  }
}

inline std::string expect_string(const Json& j, const std::string& where) {
  if (!j.is_string()) throw InputError(where + ": expected a string");
  return j.get<std::string>();
}

inline int get_int(const Json& o, const char* key, int fallback, const std::string& where) {
  if (!o.contains(key)) return fallback;
  if (!o[key].is_number_integer()) throw InputError(where + "." + key + ": expected an integer");
  return o[key].get<int>();
}

/// Coefficients keyed by variable name; missing variables are zero.
inline std::vector<Poly> covector_coeffs(const Json& j, const RingPtr& R, const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": expected an object keyed by variable");
  std::vector<Poly> c(R->nvars(), Poly(R));
  for (const auto& [k, v] : j.items()) {
    auto idx = R->index_of(k);
    if (!idx) throw InputError(where + ": unknown variable '" + k + "'");
    c[*idx] = parse_at(where + "." + k, expect_string(v, where + "." + k), R);
  }
  return c;
}

}  // namespace detail

inline ProblemSpec load_problem(const Json& j) {
  if (!j.is_object()) throw InputError("problem: expected a JSON object");
  if (!j.contains("ring") || !j["ring"].is_object()) throw InputError("ring: missing");
  const Json& r = j["ring"];
  if (!r.contains("variables") || !r["variables"].is_array() || r["variables"].empty())
    throw InputError("ring.variables: expected a nonempty array");
  std::vector<std::string> vars;
  for (std::size_t i = 0; i < r["variables"].size(); ++i)
    vars.push_back(detail::expect_string(r["variables"][i], "ring.variables[" + std::to_string(i) + "]"));
  RingPtr R;
  try {
    R = PolyRing::make(vars);
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("ring.variables: ") + e.what());
  }
  if (r.contains("inverted")) {
    if (!r["inverted"].is_array()) throw InputError("ring.inverted: expected an array");
    for (std::size_t i = 0; i < r["inverted"].size(); ++i) {
      std::string where = "ring.inverted[" + std::to_string(i) + "]";
      Poly f = detail::parse_at(where, detail::expect_string(r["inverted"][i], where), R);
      if (f.is_zero()) throw InputError(where + ": cannot invert zero");
      R = localize(R, f);
    }
  }

  if (!j.contains("distribution") || !j["distribution"].is_object()) throw InputError("distribution: missing");
  const Json& d = j["distribution"];
  const bool forms = d.contains("one_forms"), fields = d.contains("vector_fields");
  if (forms == fields) throw InputError("distribution: give exactly one of one_forms, vector_fields");
  const char* key = forms ? "one_forms" : "vector_fields";
  if (!d[key].is_array()) throw InputError(std::string("distribution.") + key + ": expected an array");
  std::vector<std::vector<Poly>> rows;
  for (std::size_t i = 0; i < d[key].size(); ++i)
    rows.push_back(detail::covector_coeffs(d[key][i], R, std::string("distribution.") + key + "[" + std::to_string(i) + "]"));

  std::optional<Distribution> dist;
  if (forms) {
    std::vector<OneForm> w;
    for (auto& c : rows) w.emplace_back(R, std::move(c));
    dist.emplace(R, std::move(w));
  } else {
    std::vector<VectorField> v;
    for (auto& c : rows) v.emplace_back(R, std::move(c));
    dist.emplace(distribution_from_fields(R, v));
  }

  ProblemSpec p{j.value("name", std::string()), R, std::move(*dist), fields, {}, {}, {}};
  if (j.contains("charts")) {
    if (!j["charts"].is_array()) throw InputError("charts: expected an array");
    for (std::size_t i = 0; i < j["charts"].size(); ++i) {
      std::string where = "charts[" + std::to_string(i) + "]";
      std::string text = detail::expect_string(j["charts"][i], where);
      Poly f = detail::parse_at(where, text, R);
      if (f.is_zero()) throw InputError(where + ": chart denominator is zero");
      p.chart_text.push_back(text);
      p.charts.push_back(f);
    }
  }
  if (j.contains("options")) {
    const Json& o = j["options"];
    if (!o.is_object()) throw InputError("options: expected an object");
    p.options.degree_bound = detail::get_int(o, "degree_bound", p.options.degree_bound, "options");
    p.options.d_alg = detail::get_int(o, "d_alg", p.options.d_alg, "options");
    p.options.samples = detail::get_int(o, "samples", p.options.samples, "options");
    if (o.contains("seed")) {
      if (!o["seed"].is_number_unsigned()) throw InputError("options.seed: expected a nonnegative integer");
      p.options.seed = o["seed"].get<std::uint64_t>();
    }
    if (p.options.degree_bound < 0 || p.options.d_alg < 0 || p.options.samples < 0)
      throw InputError("options: bounds must be nonnegative");
  }
  return p;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

inline ProblemSpec load_problem_file(const std::string& path) { return load_problem(read_json_file(path)); }

/// Map files for invariance checks: {"source": ["t"], "images": {"t": "x*y"}}.
inline RingMorphism load_morphism(const Json& j, const RingPtr& target) {
  if (!j.is_object() || !j.contains("source") || !j["source"].is_array() || j["source"].empty())
    throw InputError("map.source: expected a nonempty array of variable names");
  std::vector<std::string> src;
  for (std::size_t i = 0; i < j["source"].size(); ++i)
    src.push_back(detail::expect_string(j["source"][i], "map.source[" + std::to_string(i) + "]"));
  RingPtr S;
  try {
    S = PolyRing::make(src);
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("map.source: ") + e.what());
  }
  if (!j.contains("images") || !j["images"].is_object()) throw InputError("map.images: expected an object");
  std::vector<Poly> im;
  for (const auto& s : src) {
    if (!j["images"].contains(s)) throw InputError("map.images: no image for '" + s + "'");
    im.push_back(detail::parse_at("map.images." + s, detail::expect_string(j["images"][s], "map.images." + s), target));
  }
  try {
    return RingMorphism(S, target, std::move(im));
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("map: ") + e.what());
  }
}

}  // namespace folia
