#pragma once

// Command implementations behind the folia executable. Each returns an exit
// code and the text for stdout; input errors surface as InputError.
//
// Exit codes: 0 affirmative, 1 negative verdict, 2 input error, 3 a search
// bound was exhausted.

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "folia/first_integrals.hpp"
#include "folia/foliation.hpp"
#include "folia/problem.hpp"
#include "folia/quotient.hpp"
#include "folia/stability.hpp"
#include "folia/svg.hpp"

namespace folia {

enum ExitCode { exit_ok = 0, exit_negative = 1, exit_input = 2, exit_bound = 3 };

struct CommandResult {
  int code = exit_ok;
  std::string out;
};

/// Logging to stderr, enabled by FOLIA_LOG=info or FOLIA_LOG=debug.
inline void log_info(const std::string& msg) {
  const char* lvl = std::getenv("FOLIA_LOG");
  if (lvl && (std::string(lvl) == "info" || std::string(lvl) == "debug")) std::cerr << "[folia] " << msg << "\n";
}

namespace detail {

inline Json strings_json(const std::vector<Poly>& v) {
  Json a = Json::array();
  for (const auto& p : v) a.push_back(to_string(p));
  return a;
}

inline Json covector_json(const Covector& c) {
  Json o = Json::object();
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!c[i].is_zero()) o[c.ring->variables()[i]] = to_string(c[i]);
  return o;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

/// Denominator of the requested chart: an index into the problem's charts, an
/// expression, or the whole space when empty.
inline std::pair<std::string, Poly> select_chart(const ProblemSpec& p, const std::string& chart) {
  if (chart.empty()) return {"whole", Poly::constant(p.ring, 1)};
  bool digits = chart.find_first_not_of("0123456789") == std::string::npos;
  if (digits) {
    std::size_t k = std::stoul(chart);
    if (k >= p.charts.size())
      throw InputError("--chart: index " + chart + " out of range (" + std::to_string(p.charts.size()) + " charts)");
    return {"D(" + p.chart_text[k] + ")", p.charts[k]};
  }
  Poly f = parse_at("--chart", chart, p.ring);
  if (f.is_zero()) throw InputError("--chart: denominator is zero");
  return {"D(" + chart + ")", f};
}

inline Json algebra_json(const FirstIntegralAlgebra& a) {
  Json j;
  j["generators"] = strings_json(a.generators);
  Json tags = Json::array();
  for (std::size_t i = 0; i < a.generators.size(); ++i) tags.push_back(a.tag_ring->variables()[i]);
  j["tags"] = tags;
  j["relations"] = strings_json(a.relations.basis());
  j["degree_bound"] = a.degree_bound;
  j["complete"] = a.complete;
  return j;
}

inline Json check_json(const Check& c) {
  Json j;
  j["verdict"] = to_string(c.verdict);
  j["detail"] = c.detail;
  if (!c.witness_ideal.empty()) j["witness_ideal"] = strings_json(c.witness_ideal);
  if (c.value) j["value"] = *c.value;
  if (c.witness_element) j["witness_element"] = to_string(*c.witness_element);
  if (c.witness_polynomial) j["witness_polynomial"] = to_string(*c.witness_polynomial);
  return j;
}

inline Json certificate_json(const StabilityCertificate& c) {
  Json j;
  j["chart"] = c.chart_id;
  j["overall"] = to_string(c.overall);
  j["smooth"] = check_json(c.smooth);
  j["relative_dimension"] = check_json(c.relative_dimension);
  j["connected_fibres"] = check_json(c.connected_fibres);
  j["invariant"] = check_json(c.invariant);
  j["distribution_free"] = check_json(c.distribution_free);
  j["trusted"] = c.trusted;
  return j;
}

inline int verdict_code(Verdict v) {
  switch (v) {
    case Verdict::verified: return exit_ok;
    case Verdict::refuted: return exit_negative;
    case Verdict::unknown: return exit_bound;
  }
  return exit_bound;
}

inline std::vector<Chart> problem_charts(const ProblemSpec& p) {
  std::vector<Chart> out;
  if (p.charts.empty()) {
    out.push_back(make_chart("whole", p.dist, Poly::constant(p.ring, 1), p.options.degree_bound, p.options.d_alg));
    return out;
  }
  for (std::size_t k = 0; k < p.charts.size(); ++k) {
    log_info("chart D(" + p.chart_text[k] + ")");
    out.push_back(make_chart("D(" + p.chart_text[k] + ")", p.dist, p.charts[k], p.options.degree_bound, p.options.d_alg));
  }
  return out;
}

}  // namespace detail

inline CommandResult cmd_involutive(const ProblemSpec& p) {
  auto rep = is_involutive(p.dist);
  Json j;
  j["verdict"] = to_string(rep.verdict);
  j["auto_saturated"] = rep.auto_saturated;
  Json f = Json::array();
  for (const auto& v : rep.fields) f.push_back(detail::covector_json(v));
  j["fields"] = f;
  if (rep.pair) {
    j["witness"] = {{"pair", {rep.pair->first, rep.pair->second}}, {"bracket", detail::covector_json(*rep.bracket)}};
  }
  if (rep.denominator) j["denominator"] = to_string(*rep.denominator);
  return {rep.verdict == Involutivity::no ? exit_negative : exit_ok, detail::dump(j)};
}

inline CommandResult cmd_first_integrals(const ProblemSpec& p, const std::string& chart, std::optional<int> degree) {
  auto [id, f] = detail::select_chart(p, chart);
  int D = degree.value_or(p.options.degree_bound);
  if (D < 0) throw InputError("--degree: must be nonnegative");
  Distribution d = restrict_to_open(p.dist, f);
  log_info("first integrals on " + id + " at degree " + std::to_string(D));
  auto alg = compute_algebra(d, D);
  Json j = detail::algebra_json(alg);
  j["chart"] = id;
  j["denominator"] = to_string(f);
  return {exit_ok, detail::dump(j)};
}

inline CommandResult cmd_invariance(const ProblemSpec& p, const Json& map) {
  auto phi = load_morphism(map, p.ring);
  auto rep = is_invariant(phi, p.dist);
  Json j;
  j["invariant"] = rep.invariant;
  if (rep.witness) {
    j["witness"] = phi.source()->variables()[*rep.witness];
    j["foliated_derivative"] = detail::covector_json(*rep.derivative);
  }
  return {rep.invariant ? exit_ok : exit_negative, detail::dump(j)};
}

inline CommandResult cmd_stability(const ProblemSpec& p, const std::string& chart) {
  auto [id, f] = detail::select_chart(p, chart);
  auto c = make_chart(id, p.dist, f, p.options.degree_bound, p.options.d_alg);
  Json j = detail::certificate_json(c.certificate);
  j["algebra"] = detail::algebra_json(c.algebra);
  return {detail::verdict_code(c.certificate.overall), detail::dump(j)};
}

inline Json atlas_json(const Atlas& a) {
  Json j;
  j["schema"] = "folia.atlas/1";
  Json charts = Json::array();
  for (const auto& c : a.charts) {
    Json cj = detail::algebra_json(c.algebra);
    cj["id"] = c.id;
    cj["denominator"] = to_string(c.denominator);
    cj["certificate"] = detail::certificate_json(c.certificate);
    charts.push_back(cj);
  }
  j["charts"] = charts;
  Json tr = Json::array();
  for (const auto& t : a.transitions) {
    Json tj;
    tj["from"] = a.charts[t.from].id;
    tj["to"] = a.charts[t.to].id;
    tj["overlap_generators"] = detail::strings_json(t.overlap.generators);
    tj["localizer_from"] = to_string(t.localizer_i);
    tj["localizer_to"] = to_string(t.localizer_j);
    Json im = Json::object();
    for (std::size_t v = 0; v < t.iso.images().size(); ++v)
      im[t.iso.source()->variables()[v]] = to_string(t.iso.images()[v]);
    tj["images"] = im;
    tr.push_back(tj);
  }
  j["transitions"] = tr;
  j["coherent"] = a.coherent;
  j["cocycle_ok"] = a.cocycle_ok;
  j["cocycle_failures"] = a.cocycle_failures;
  j["separated"] = a.separated;
  if (a.separation_witness) {
    const auto& w = *a.separation_witness;
    j["separation_witness"] = {{"charts", {a.charts[w.i].id, a.charts[w.j].id}},
                               {"element", to_string(w.element)},
                               {"coordinates", w.coordinates}};
  } else {
    j["separation_witness"] = nullptr;
  }
  j["classification"] = a.classification;
  return j;
}

inline CommandResult cmd_quotient(const ProblemSpec& p) {
  auto charts = detail::problem_charts(p);
  for (const auto& c : charts)
    if (c.certificate.overall != Verdict::verified) {
      Json j;
      j["schema"] = "folia.atlas/1";
      j["error"] = "chart " + c.id + " is not certified stable";
      j["certificate"] = detail::certificate_json(c.certificate);
      return {detail::verdict_code(c.certificate.overall), detail::dump(j)};
    }
  try {
    Atlas a = build_atlas(std::move(charts), p.options.degree_bound);
    return {a.cocycle_ok ? exit_ok : exit_negative, detail::dump(atlas_json(a))};
  } catch (const RecognitionFailure& e) {
    Json j;
    j["schema"] = "folia.atlas/1";
    j["error"] = e.what();
    return {exit_bound, detail::dump(j)};
  }
}

inline std::vector<Rational> parse_point(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      Rational r(item);
      r.canonicalize();
      out.push_back(r);
    } catch (const std::invalid_argument&) {
      throw InputError("--point: '" + item + "' is not a rational number");
    }
  }
  if (out.empty() && !text.empty()) throw InputError("--point: empty");
  return out;
}

inline CommandResult cmd_leaf(const ProblemSpec& p, const std::string& chart, const std::string& point) {
  auto charts = detail::problem_charts(p);
  std::size_t k = 0;
  if (!chart.empty()) {
    if (chart.find_first_not_of("0123456789") != std::string::npos) throw InputError("--chart: expected an index");
    k = std::stoul(chart);
    if (k >= charts.size()) throw InputError("--chart: index out of range");
  }
  Atlas a;
  a.charts = std::move(charts);
  auto c = parse_point(point);
  if (c.size() != a.charts[k].algebra.generators.size())
    throw InputError("--point: chart " + a.charts[k].id + " needs " +
                     std::to_string(a.charts[k].algebra.generators.size()) + " coordinates");
  auto rep = leaf_fibre(a, k, c);
  Json j;
  j["chart"] = a.charts[k].id;
  j["generators"] = detail::strings_json(a.charts[k].algebra.generators);
  j["ideal"] = detail::strings_json(rep.ideal);
  j["empty"] = rep.empty;
  j["dimension"] = rep.dimension;
  j["dimension_ok"] = rep.dimension_ok;
  j["smooth"] = rep.smooth;
  j["irreducible"] = to_string(rep.irreducible);
  j["tangent"] = rep.tangent;
  bool ok = !rep.empty && rep.dimension_ok && rep.smooth && rep.tangent;
  return {ok ? exit_ok : exit_negative, detail::dump(j)};
}

inline PlotWindow parse_window(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError("--window: '" + item + "' is not a number");
    }
  }
  if (v.size() != 4 || !(v[0] < v[1]) || !(v[2] < v[3])) throw InputError("--window: expected x0,x1,y0,y1 with x0<x1, y0<y1");
  return {v[0], v[1], v[2], v[3]};
}

inline CommandResult cmd_plot(const ProblemSpec& p, const std::string& window, int density) {
  if (p.ring->nvars() != 2) throw InputError("plot: needs exactly 2 variables");
  if (density < 1 || density > 200) throw InputError("--density: expected 1..200");
  PlotWindow win = parse_window(window);
  std::vector<LevelSet> levels;
  auto values = sample_rationals(7);
  std::vector<Poly> dens = p.charts.empty() ? std::vector<Poly>{Poly::constant(p.ring, 1)} : p.charts;
  auto alg = compute_algebra(restrict_to_open(p.dist, dens.front()), p.options.degree_bound);
  for (const auto& g : alg.generators) levels.push_back({g, values});
  return {exit_ok, render_svg(dual_vector_fields(saturate_torsion(p.dist)), levels, win, density)};
}

}  // namespace folia
