// End-to-end acceptance run: one PASS/FAIL line per criterion, each with a
// pinned wall-clock limit. Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "folia/cli.hpp"
#include "oracles.hpp"

using namespace folia;

namespace {

struct Outcome {
  bool ok = true;
  std::string note;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      note = what;
    }
  }
};

ProblemSpec load(const std::string& name) { return load_problem_file(std::string(FOLIA_PROBLEM_DIR) + "/" + name); }

Poly P(const std::string& s, const RingPtr& R) { return parse_poly(s, R); }

/// Canonical form of an expected generator: monic, no constant term.
std::string canon(const std::string& s, const RingPtr& R) {
  Poly p = P(s, R);
  return to_string((p - Poly::constant(R, p.constant_term())).monic());
}

std::set<std::string> as_set(const Json& a) {
  std::set<std::string> s;
  for (const auto& x : a) s.insert(x.get<std::string>());
  return s;
}

std::set<std::string> canon_set(std::initializer_list<const char*> v, const RingPtr& R) {
  std::set<std::string> s;
  for (const char* x : v) s.insert(canon(x, R));
  return s;
}

RingPtr chart_ring(const ProblemSpec& p, const std::string& f) { return localize(p.ring, P(f, p.ring)); }

Json first_integrals(const ProblemSpec& p, const std::string& chart, int D) {
  return Json::parse(cmd_first_integrals(p, chart, D).out);
}

// 1
Outcome parabola_oracle() {
  Outcome o;
  auto p = load("parabola.json");
  auto j = first_integrals(p, "", 2);
  o.require(as_set(j["generators"]) == canon_set({"y - x^2"}, p.ring), "generators " + j["generators"].dump());
  o.require(j["relations"].empty(), "relations not empty");
  return o;
}

// 2
Outcome radii_oracle() {
  Outcome o;
  auto p = load("radii.json");
  auto whole = first_integrals(p, "", 6);
  o.require(whole["generators"].empty(), "whole plane has nonconstant first integrals");
  auto dx = first_integrals(p, "x", 2);
  o.require(as_set(dx["generators"]) == canon_set({"y/x"}, chart_ring(p, "x")), "D(x) " + dx["generators"].dump());
  auto dxy = first_integrals(p, "x*y", 2);
  o.require(as_set(dxy["generators"]) == canon_set({"y/x", "x/y"}, chart_ring(p, "x*y")),
            "D(xy) " + dxy["generators"].dump());
  o.require(dxy["relations"] == Json({"t1*t2 - 1"}), "D(xy) relations " + dxy["relations"].dump());
  auto a = Json::parse(cmd_quotient(p).out);
  o.require(a["cocycle_ok"] == true, "cocycle");
  o.require(a["separated"] == true, "separated");
  o.require(a["classification"] == "projective line", "classification " + a["classification"].dump());
  o.require(a["transitions"].size() == 2 && a["transitions"][0]["images"] == Json({{"t1", "1/t1"}}),
            "transition " + a["transitions"].dump());
  return o;
}

// 3
Outcome hyperbolae_oracle() {
  Outcome o;
  auto p = load("hyperbolae.json");
  for (const char* f : {"x", "y"}) {
    auto j = first_integrals(p, f, 2);
    o.require(as_set(j["generators"]) == canon_set({"x*y"}, chart_ring(p, f)), std::string("D(") + f + ")");
  }
  auto dxy = first_integrals(p, "x*y", 2);
  o.require(as_set(dxy["generators"]) == canon_set({"x*y", "1/(x*y)"}, chart_ring(p, "x*y")),
            "D(xy) " + dxy["generators"].dump());
  auto a = Json::parse(cmd_quotient(p).out);
  o.require(a["separated"] == false, "separated");
  o.require(!a["separation_witness"].is_null() && a["separation_witness"]["coordinates"] == "1/t1",
            "witness " + a["separation_witness"].dump());
  o.require(a["classification"] == "line with doubled origin", "classification " + a["classification"].dump());
  auto s = Json::parse(cmd_stability(p, "").out);
  o.require(s["smooth"]["verdict"] == "refuted", "full-plane smoothness not refuted");
  // Witness (x, y), compared as ideals.
  std::vector<Poly> w;
  for (const auto& g : s["smooth"]["witness_ideal"]) w.push_back(P(g.get<std::string>(), p.ring));
  Ideal W = buchberger(Ideal(p.ring, w));
  Ideal origin = buchberger(Ideal(p.ring, {P("x", p.ring), P("y", p.ring)}));
  bool same = W.basis().size() == origin.basis().size();
  for (std::size_t i = 0; same && i < W.basis().size(); ++i) same = W.basis()[i] == origin.basis()[i];
  o.require(same, "witness ideal " + s["smooth"]["witness_ideal"].dump());
  return o;
}

// 4
Outcome hyperbolae3d_oracle() {
  Outcome o;
  auto p = load("hyperbolae3d.json");
  auto a = Json::parse(cmd_quotient(p).out);
  const std::vector<std::pair<const char*, std::set<std::string>>> expected{
      {"x", canon_set({"x*y", "x*z"}, chart_ring(p, "x"))},
      {"y", canon_set({"x*y", "z/y"}, chart_ring(p, "y"))},
      {"z", canon_set({"x*z", "y/z"}, chart_ring(p, "z"))}};
  o.require(a["charts"].size() == 3, "chart count");
  for (std::size_t k = 0; k < 3 && o.ok; ++k) {
    o.require(as_set(a["charts"][k]["generators"]) == expected[k].second,
              std::string("D(") + expected[k].first + ") " + a["charts"][k]["generators"].dump());
    o.require(a["charts"][k]["certificate"]["overall"] == "verified",
              std::string("D(") + expected[k].first + ") not verified");
  }
  o.require(a["cocycle_ok"] == true, "cocycle");
  o.require(a["separated"] == false, "separated");
  auto leaf = Json::parse(cmd_leaf(p, "0", "0,0").out);
  o.require(as_set(leaf["ideal"]) == std::set<std::string>{"y", "z"}, "leaf " + leaf["ideal"].dump());
  o.require(leaf["smooth"] == true && leaf["tangent"] == true, "leaf report");
  return o;
}

std::vector<std::pair<std::string, Distribution>> corpus_distributions() {
  std::vector<std::pair<std::string, Distribution>> out;
  for (const char* f : {"parabola.json", "radii.json", "hyperbolae.json", "hyperbolae3d.json"}) {
    auto p = load(f);
    out.emplace_back(f, saturate_torsion(p.dist));
  }
  return out;
}

// 5
Outcome differentiation_rules() {
  Outcome o;
  std::mt19937_64 rng(5);
  for (const auto& [name, d] : corpus_distributions()) {
    auto alg = compute_algebra(d, 2);
    const auto& R = d.ring();
    std::uniform_int_distribution<int> coef(-3, 3), deg(0, 3);
    auto integral = [&] {
      // Random element of Q[first integrals] of low degree.
      Poly a = Poly::constant(R, coef(rng));
      for (const auto& g : alg.generators) a += Rational(coef(rng)) * g;
      return a;
    };
    for (int i = 0; i < 500 && o.ok; ++i) {
      Poly f = oracle::random_poly(R, 3, rng), g = oracle::random_poly(R, 3, rng);
      OneForm df = foliated_d(f, d), dg = foliated_d(g, d);
      o.require(foliated_d(f + g, d) == module_normal_form(df + dg, d), name + ": addition rule");
      o.require(foliated_d(f * g, d) == module_normal_form(f * dg + g * df, d), name + ": product rule");
      // p(t) = a0 + a1 t + ... + ak t^k with first-integral coefficients.
      int k = deg(rng);
      std::vector<Poly> a;
      for (int e = 0; e <= k; ++e) a.push_back(integral());
      Poly pf(R), dp(R);
      for (int e = 0; e <= k; ++e) {
        pf += a[e] * f.pow(static_cast<unsigned>(e));
        if (e > 0) dp += Rational(e) * a[e] * f.pow(static_cast<unsigned>(e - 1));
      }
      o.require(foliated_d(pf, d) == module_normal_form(dp * df, d), name + ": chain rule");
    }
  }
  return o;
}

std::vector<Chart> verified_charts() {
  std::vector<Chart> out;
  for (const char* f : {"parabola.json", "radii.json", "hyperbolae.json", "hyperbolae3d.json"})
    for (auto& c : detail::problem_charts(load(f)))
      if (c.certificate.overall == Verdict::verified) out.push_back(std::move(c));
  return out;
}

// 6
Outcome localization_suite() {
  Outcome o;
  int n = 0;
  for (const auto& c : verified_charts())
    for (const auto& g : c.algebra.generators) {
      ++n;
      auto rep = localization_check(c.dist, g, 4);
      o.require(rep.passed, c.id + " at " + to_string(g) +
                                (rep.failing_generator ? ": " + to_string(*rep.failing_generator) : std::string()));
    }
  o.require(n > 0, "no verified charts");
  if (o.ok) o.note = std::to_string(n) + " denominators";
  return o;
}

// 7
Outcome closedness_suite() {
  Outcome o;
  int n = 0;
  for (const auto& c : verified_charts()) {
    ++n;
    auto rep = closedness_probe(c.algebra, c.dist, 200, 2, 7);
    o.require(rep.passed && rep.samples == 200,
              c.id + (rep.witness_root ? ": root " + to_string(*rep.witness_root) : std::string()));
  }
  o.require(n > 0, "no verified charts");
  if (o.ok) o.note = std::to_string(n) + " charts";
  return o;
}

// 8
Outcome involutivity_crosscheck() {
  Outcome o;
  std::mt19937_64 rng(8);
  int yes = 0, no = 0;
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = 2 + i % 2;
    auto R = n == 2 ? PolyRing::make({"x", "y"}) : PolyRing::make({"x", "y", "z"});
    OneForm w(R);
    if (i % 2 == 0) {
      // h dg: integrable by construction.
      Poly h = oracle::random_poly(R, 1, rng, 2), g = oracle::random_poly(R, 2, rng, 3);
      w = h * exterior_d(g);
    } else {
      for (std::size_t k = 0; k < n; ++k) w.coeffs[k] = oracle::random_poly(R, 2, rng, 3);
    }
    if (w.is_zero()) w.coeffs[0] = Poly::constant(R, 1);
    Distribution d(R, {w});
    bool bracket = is_involutive(d).verdict != Involutivity::no;
    bool frob = frobenius_corank_one(d);
    (bracket ? yes : no) += 1;
    o.require(bracket == frob, "disagreement on instance " + std::to_string(i));
  }
  o.require(yes > 0 && no > 0, "instances did not exercise both verdicts");
  auto S = PolyRing::make({"x", "y", "z"});
  OneForm contact(S, {-P("y", S), Poly(S), Poly::constant(S, 1)});
  o.require(is_involutive(Distribution(S, {contact})).verdict == Involutivity::no, "contact form not refuted");
  if (o.ok) o.note = std::to_string(yes) + " integrable, " + std::to_string(no) + " not";
  return o;
}

/// Calls visit on every vector with entries in {-1, 0, 1} on `slots`
/// coordinates and at most `max_terms` nonzero entries.
void enumerate(std::size_t slots, std::size_t max_terms, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> v(slots, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t used) {
    visit(v);
    if (used == max_terms) return;
    for (std::size_t i = start; i < slots; ++i)
      for (int c : {1, -1}) {
        v[i] = c;
        rec(i + 1, used + 1);
        v[i] = 0;
      }
  };
  rec(0, 0);
}

// 9
Outcome brute_force_equivalence() {
  Outcome o;
  long checked = 0;
  auto R2 = PolyRing::make({"x", "y"});
  auto R3 = PolyRing::make({"x", "y", "z"});

  // Ideal membership.
  struct IdealCase {
    RingPtr R;
    std::vector<const char*> gens;
    std::size_t max_terms;
    int bound;
  };
  std::vector<IdealCase> ideals{{R2, {"y - x^2"}, 10, 7},
                                {R2, {"x*y - 1"}, 10, 7},
                                {R2, {"x^2", "x*y - y^2"}, 10, 7},
                                {R3, {"x*y - z", "y^2 - x"}, 3, 7},
                                {R3, {"x*z - y^2"}, 3, 6}};
  for (const auto& c : ideals) {
    std::vector<Poly> gens;
    for (const char* g : c.gens) gens.push_back(P(g, c.R));
    Ideal I = buchberger(Ideal(c.R, gens));
    auto span = oracle::ideal_span(c.R, gens, c.bound);
    auto mons = oracle::monomials(c.R, 3);
    enumerate(mons.size(), c.max_terms, [&](const std::vector<int>& v) {
      Poly f(c.R);
      for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i]) f += Rational(v[i]) * mons[i];
      ++checked;
      if (contains(I, f) != span.contains(oracle::to_vec(f))) o.require(false, "ideal membership of " + to_string(f));
    });
  }

  // Module membership in Omega^1 / N.
  for (const auto& [name, d] : corpus_distributions()) {
    const auto& R = d.ring();
    auto span = oracle::module_span(R, d.all_relations(), 7);
    auto mons = oracle::monomials(R, 3);
    const std::size_t n = R->nvars();
    enumerate(mons.size() * n, n == 2 ? 3 : 2, [&](const std::vector<int>& v) {
      OneForm w(R);
      for (std::size_t s = 0; s < v.size(); ++s)
        if (v[s]) w.coeffs[s % n] += Rational(v[s]) * mons[s / n];
      ++checked;
      if (module_normal_form(w, d).is_zero() != span.contains(oracle::to_vec(w)))
        o.require(false, name + ": module membership");
    });
  }
  if (o.ok) o.note = std::to_string(checked) + " inputs";
  return o;
}

// 10
Outcome invariance_oracle() {
  Outcome o;
  auto h = load("hyperbolae.json");
  auto p = load("parabola.json");
  auto map = [](const char* img) { return Json{{"source", {"t"}}, {"images", {{"t", img}}}}; };
  o.require(cmd_invariance(h, map("x*y")).code == exit_ok, "t -> xy on hyperbolae");
  o.require(cmd_invariance(p, map("y - x^2")).code == exit_ok, "t -> y - x^2 on parabola");
  o.require(cmd_invariance(h, map("x")).code == exit_negative, "t -> x on hyperbolae");
  o.require(cmd_invariance(p, map("x")).code == exit_negative, "t -> x on parabola");
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, "parabola oracle", 1, parabola_oracle},
      {2, "radii oracle", 5, radii_oracle},
      {3, "hyperbolae oracle", 5, hyperbolae_oracle},
      {4, "three-dimensional hyperbolae oracle", 30, hyperbolae3d_oracle},
      {5, "differentiation rules", 10, differentiation_rules},
      {6, "first integrals and localization", 10, localization_suite},
      {7, "algebraic closedness", 10, closedness_suite},
      {8, "involutivity crosscheck", 10, involutivity_crosscheck},
      {9, "brute-force membership equivalence", 60, brute_force_equivalence},
      {10, "invariance oracle", 1, invariance_oracle},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.note = std::string("exception: ") + e.what();
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.ok && s > c.limit_s) {
      o.ok = false;
      o.note = "over time limit";
    }
    if (!o.ok) ++failed;
    std::printf("criterion %2d %-38s %s  %.2fs / %.0fs%s%s\n", c.id, c.name, o.ok ? "PASS" : "FAIL", s, c.limit_s,
                o.note.empty() ? "" : "  ", o.note.c_str());
  }
  return failed == 0 ? 0 : 1;
}
