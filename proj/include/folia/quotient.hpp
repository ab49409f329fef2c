#pragma once

// Gluing chart quotients: overlaps, transition isomorphisms, cocycle and
// separatedness checks, a small classifier, and leaves as fibres.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "folia/diffmod.hpp"
#include "folia/first_integrals.hpp"
#include "folia/foliation.hpp"
#include "folia/ideal.hpp"
#include "folia/parse.hpp"
#include "folia/stability.hpp"

namespace folia {

struct RecognitionFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Chart {
  std::string id;
  Poly denominator;   // in the ambient ring of the problem
  Distribution dist;  // restricted to D(denominator)
  FirstIntegralAlgebra algebra;
  StabilityCertificate certificate;

  const RingPtr& ring() const { return dist.ring(); }
};

inline Chart make_chart(std::string id, const Distribution& global, const Poly& f, int D, int d_alg = 3) {
  Distribution d = saturate_torsion(restrict_to_open(global, f));
  auto alg = compute_algebra(d, D);
  auto cert = certify_chart(id, d, alg, d_alg);
  return Chart{std::move(id), f, std::move(d), std::move(alg), std::move(cert)};
}

/// (A)_h as a ring on the tags: the algebra's quotient ring localized at p.
inline RingPtr localized_tag_ring(const FirstIntegralAlgebra& alg, const Poly& p) {
  RingPtr Q = alg.quotient_ring();
  return localize(Q, embed(p, Q));
}

struct TransitionMap {
  std::size_t from = 0, to = 0;
  FirstIntegralAlgebra overlap;  // A_ij on D(f_i f_j)
  Poly localizer_i;              // h_i in A_i, as an element of B_i
  Poly localizer_i_tags;         // the same in A_i's tags
  Poly localizer_j;
  Poly localizer_j_tags;
  /// (A_j)_{h_j} -> (A_i)_{h_i}.
  RingMorphism iso;
};

namespace detail {

struct Localizer {
  Poly h;       // in B_i
  Poly h_tags;  // in A_i's tag ring
};

/// Element g of the overlap written as q(t) / p^k in A_i coordinates.
struct ChartExpression {
  Poly q;
  int k = 0;
};

inline std::optional<ChartExpression> chart_expression(const SubalgebraEngine& engine, const Poly& h, const Poly& g,
                                                       int max_k) {
  Poly cur = g;
  for (int k = 0; k <= max_k; ++k) {
    if (auto q = engine.express(cur)) return ChartExpression{*q, k};
    cur = cur * h;
  }
  return std::nullopt;
}

inline std::vector<Poly> embed_all(const std::vector<Poly>& v, const RingPtr& R) {
  std::vector<Poly> out;
  for (const auto& p : v) out.push_back(embed(p, R));
  return out;
}

/// Searches h in A_i with (A_i)_h = A_ij: 1, the generators and their
/// pairwise products. Verified both ways by subalgebra membership.
inline std::optional<Localizer> find_localizer(const FirstIntegralAlgebra& Ai, const FirstIntegralAlgebra& Aij,
                                               int max_k) {
  const RingPtr& R = Aij.ambient;
  std::vector<Localizer> cand;
  const RingPtr& T = Ai.tag_ring;
  cand.push_back({Poly::constant(Ai.ambient, 1), Poly::constant(T, 1)});
  for (std::size_t a = 0; a < Ai.generators.size(); ++a)
    cand.push_back({Ai.generators[a], Poly::variable(T, a)});
  for (std::size_t a = 0; a < Ai.generators.size(); ++a)
    for (std::size_t b = a; b < Ai.generators.size(); ++b)
      cand.push_back({Ai.generators[a] * Ai.generators[b], Poly::variable(T, a) * Poly::variable(T, b)});

  auto gi = embed_all(Ai.generators, R);
  for (const auto& g : gi)
    if (!subalgebra_membership(g, Aij).member) return std::nullopt;
  SubalgebraEngine engine_i(R, gi);
  for (const auto& c : cand) {
    Poly H = embed(c.h, R);
    auto inv = inverse(H);
    if (!inv || !subalgebra_membership(*inv, Aij).member) continue;
    bool ok = true;
    for (const auto& g : Aij.generators)
      if (!chart_expression(engine_i, H, g, max_k)) {
        ok = false;
        break;
      }
    if (ok) return c;
  }
  return std::nullopt;
}

inline Poly tag_image(const ChartExpression& e, const RingPtr& S, const Poly& p) {
  Poly out = embed(e.q, S);
  if (e.k > 0) out = out * inverse(embed(p, S))->pow(static_cast<unsigned>(e.k));
  return out;
}

}  // namespace detail

/// Transition data between charts i and j, or nullopt when D(f_i f_j) is
/// empty. Throws RecognitionFailure when A_ij is not recognized as a
/// localization of A_i or A_j at a searched element.
inline std::optional<TransitionMap> overlap(const std::vector<Chart>& charts, std::size_t i, std::size_t j, int D) {
  const Chart& ci = charts[i];
  const Chart& cj = charts[j];
  RingPtr Rij = localize(ci.ring(), embed(cj.denominator, ci.ring()));
  if (Rij->is_trivial()) return std::nullopt;
  Distribution dij = restrict_to_open(ci.dist, embed(cj.denominator, ci.ring()));
  auto Aij = i == j ? ci.algebra : compute_algebra(dij, D);
  const int max_k = 2 * D + 2;
  auto li = detail::find_localizer(ci.algebra, Aij, max_k);
  if (!li) throw RecognitionFailure("overlap of " + ci.id + " and " + cj.id + " is not a localization of " + ci.id);
  auto lj = detail::find_localizer(cj.algebra, Aij, max_k);
  if (!lj) throw RecognitionFailure("overlap of " + ci.id + " and " + cj.id + " is not a localization of " + cj.id);

  RingPtr Si = localized_tag_ring(ci.algebra, li->h_tags);
  RingPtr Sj = localized_tag_ring(cj.algebra, lj->h_tags);
  const RingPtr& R = Aij.ambient;
  Poly H = embed(li->h, R);
  SubalgebraEngine engine_i(R, detail::embed_all(ci.algebra.generators, R));
  std::vector<Poly> images;
  for (const auto& g : cj.algebra.generators) {
    auto e = detail::chart_expression(engine_i, H, embed(g, R), max_k);
    if (!e) throw RecognitionFailure("generator of " + cj.id + " not expressible on " + ci.id);
    images.push_back(detail::tag_image(*e, Si, li->h_tags));
  }
  RingMorphism iso = cj.algebra.generators.empty()
                         ? RingMorphism(Sj, Si, std::vector<Poly>(Sj->nvars(), Poly(Si)))
                         : RingMorphism(Sj, Si, std::move(images));
  return TransitionMap{i, j, std::move(Aij), li->h, li->h_tags, lj->h, lj->h_tags, std::move(iso)};
}

struct SeparationWitness {
  std::size_t i = 0, j = 0;
  Poly element;             // generator of A_ij outside the joint image
  std::string coordinates;  // the same in chart i's tags, e.g. 1/t1
};

struct Atlas {
  std::vector<Chart> charts;
  std::vector<TransitionMap> transitions;
  bool coherent = true;
  bool cocycle_ok = true;
  std::vector<std::string> cocycle_failures;
  bool separated = true;
  std::optional<SeparationWitness> separation_witness;
  std::string classification = "unclassified";

  const TransitionMap* transition(std::size_t i, std::size_t j) const {
    for (const auto& t : transitions)
      if (t.from == i && t.to == j) return &t;
    return nullptr;
  }
};

namespace detail {

inline bool is_identity(const RingMorphism& m) {
  if (m.source()->variables() != m.target()->variables()) return false;
  for (std::size_t v = 0; v < m.images().size(); ++v)
    if (!(m.images()[v] == Poly::variable(m.target(), v))) return false;
  return true;
}

/// iso_ij . iso_ji is the identity on the generators of (A_i)_{h_i}.
inline bool coherent(const TransitionMap& ij, const TransitionMap& ji) {
  try {
    return is_identity(ji.iso.then(ij.iso));
  } catch (const std::exception&) {
    return false;
  }
}

/// phi_ik = phi_ij . phi_jk on the triple overlap, compared in A_i localized
/// at h_ij h_ik. Building the morphisms from (A_j)_{h_ji h_jk} and
/// (A_k)_{h_ki h_kj} checks that the localizers correspond (condition 1).
inline std::optional<std::string> cocycle(const Atlas& a, std::size_t i, std::size_t j, std::size_t k) {
  const auto* ij = a.transition(i, j);
  const auto* jk = a.transition(j, k);
  const auto* ik = a.transition(i, k);
  const auto* ji = a.transition(j, i);
  const auto* kj = a.transition(k, j);
  const auto* ki = a.transition(k, i);
  const std::string tag = "(" + a.charts[i].id + ", " + a.charts[j].id + ", " + a.charts[k].id + ")";
  if (!ij || !jk || !ik || !ji || !kj || !ki) return std::nullopt;  // empty triple overlap
  try {
    RingPtr Sik = localize(ij->iso.target(), embed(ik->localizer_i_tags, ij->iso.target()));
    RingPtr Sjk = localize(ji->iso.target(), embed(jk->localizer_i_tags, ji->iso.target()));
    RingPtr Skk = localize(ki->iso.target(), embed(kj->localizer_i_tags, ki->iso.target()));
    // phi_ij extended to (A_j)_{h_ji h_jk} -> (A_i)_{h_ij h_ik}.
    RingMorphism phi_ij(Sjk, Sik, detail::embed_all(ij->iso.images(), Sik));
    RingMorphism phi_ik(Skk, Sik, detail::embed_all(ik->iso.images(), Sik));
    RingMorphism phi_jk(Skk, Sjk, detail::embed_all(jk->iso.images(), Sjk));
    auto composite = phi_jk.then(phi_ij);
    for (std::size_t v = 0; v < phi_ik.images().size(); ++v)
      if (!(composite.images()[v] == phi_ik.images()[v]))
        return "cocycle fails on " + tag + " at t" + std::to_string(v + 1);
    return std::nullopt;
  } catch (const std::invalid_argument& e) {
    return "localizers do not correspond on " + tag + ": " + e.what();
  }
}

inline std::optional<SeparationWitness> separation(const Atlas& a, const TransitionMap& t) {
  const Chart& ci = a.charts[t.from];
  const Chart& cj = a.charts[t.to];
  const RingPtr& R = t.overlap.ambient;
  auto joint = detail::embed_all(ci.algebra.generators, R);
  for (const auto& g : detail::embed_all(cj.algebra.generators, R)) joint.push_back(g);
  SubalgebraEngine engine(R, joint);
  SubalgebraEngine engine_i(R, detail::embed_all(ci.algebra.generators, R));
  for (const auto& g : t.overlap.generators) {
    if (!joint.empty() && engine.contains(g)) continue;
    SeparationWitness w{t.from, t.to, g, to_string(g)};
    RingPtr Si = t.iso.target();
    if (auto e = detail::chart_expression(engine_i, embed(t.localizer_i, R), g, 2 * t.overlap.degree_bound + 2))
      w.coordinates = to_string(detail::tag_image(*e, Si, t.localizer_i_tags));
    return w;
  }
  return std::nullopt;
}

inline std::string space_name(std::size_t n) {
  switch (n) {
    case 0: return "point";
    case 1: return "affine line";
    case 2: return "affine plane";
    default: return "affine " + std::to_string(n) + "-space";
  }
}

inline std::string classify(const Atlas& a) {
  auto free_one = [](const Chart& c) { return c.algebra.generators.size() == 1 && c.algebra.relations.basis().empty(); };
  if (a.charts.size() == 1) {
    const auto& alg = a.charts[0].algebra;
    if (alg.relations.basis().empty()) return space_name(alg.generators.size());
    return "unclassified";
  }
  if (a.charts.size() == 2 && free_one(a.charts[0]) && free_one(a.charts[1])) {
    const auto* t = a.transition(0, 1);
    if (!t) return "unclassified";
    const Poly& im = t->iso.images()[0];
    const RingPtr& S = t->iso.target();
    Poly u = Poly::variable(S, 0);
    // t -> c/t.
    Poly c = im * u;
    if (c.is_constant() && !c.is_zero() && a.separated) return "projective line";
    // t -> a t + b.
    if (im.is_polynomial() && im.degree() == 1 && !a.separated) return "line with doubled origin";
  }
  return "unclassified";
}

}  // namespace detail

/// Glues certified charts: transitions for every ordered pair with nonempty
/// overlap, coherence, cocycle on every ordered triple, separatedness and a
/// name when the pattern is known.
inline Atlas build_atlas(std::vector<Chart> charts, int D) {
  for (const auto& c : charts)
    if (c.certificate.overall != Verdict::verified)
      throw std::invalid_argument("chart " + c.id + " is not certified stable");
  Atlas a;
  a.charts = std::move(charts);
  const std::size_t n = a.charts.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (auto t = overlap(a.charts, i, j, D)) a.transitions.push_back(std::move(*t));
    }
  for (const auto& t : a.transitions) {
    const auto* back = a.transition(t.to, t.from);
    if (!back || !detail::coherent(t, *back)) a.coherent = false;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        if (i == j || j == k || i == k) continue;
        if (auto f = detail::cocycle(a, i, j, k)) {
          a.cocycle_ok = false;
          a.cocycle_failures.push_back(*f);
        }
      }
  if (!a.coherent) a.cocycle_ok = false;
  for (const auto& t : a.transitions) {
    if (t.from > t.to) continue;
    if (auto w = detail::separation(a, t)) {
      a.separated = false;
      a.separation_witness = w;
      break;
    }
  }
  a.classification = detail::classify(a);
  return a;
}

inline bool separatedness_check(const Atlas& a) { return a.separated; }

struct LeafReport {
  std::vector<Poly> ideal;  // reduced basis of the fibre ideal in B_i
  bool empty = false;
  int dimension = -1;
  bool dimension_ok = false;
  bool smooth = false;
  Verdict irreducible = Verdict::unknown;
  bool tangent = false;
};

/// Fibre of chart k over the point t = c: the ideal (g_l - c_l) in B_k, with
/// its dimension, Jacobian smoothness, irreducibility (from the chart's
/// connected-fibres verdict) and tangency to the distribution.
inline LeafReport leaf_fibre(const Atlas& a, std::size_t k, const std::vector<Rational>& point) {
  if (k >= a.charts.size()) throw std::invalid_argument("no such chart");
  const Chart& c = a.charts[k];
  const auto& g = c.algebra.generators;
  if (point.size() != g.size())
    throw std::invalid_argument("point needs " + std::to_string(g.size()) + " coordinates");
  const RingPtr& B = c.ring();
  std::vector<Poly> eqs;
  for (std::size_t l = 0; l < g.size(); ++l) eqs.push_back(g[l] - Poly::constant(B, point[l]));
  Ideal I = buchberger(Ideal(B, eqs));
  LeafReport rep;
  // Same ideal, written with denominators cleared: x*y - 1 rather than y - 1/x.
  for (const auto& e : I.basis()) rep.ideal.push_back(clear_denominators(e).monic());
  if (is_unit_ideal(I)) {
    rep.empty = true;
    return rep;
  }
  rep.dimension = krull_dimension(I);
  rep.dimension_ok = rep.dimension == c.dist.rank();

  const int dim_b = detail::ambient_dimension(B);
  const std::size_t codim = static_cast<std::size_t>(dim_b - rep.dimension);
  std::vector<std::vector<Poly>> jac;
  for (const auto& e : rep.ideal) jac.push_back(exterior_d(e).coeffs);
  auto gens = rep.ideal;
  if (codim == 0) {
    rep.smooth = detail::ambient_smooth(B);
  } else {
    for (auto& m : minors(jac, codim, B)) gens.push_back(std::move(m));
    rep.smooth = is_unit_ideal(Ideal(B, gens));
  }
  rep.irreducible = c.certificate.connected_fibres.verdict == Verdict::verified ? Verdict::verified : Verdict::unknown;

  // Tangency: each relation lies in the conormal module (dg) + I * Omega.
  std::vector<OneForm> conormal;
  for (const auto& e : eqs) conormal.push_back(exterior_d(e));
  for (const auto& e : rep.ideal)
    for (std::size_t v = 0; v < B->nvars(); ++v) {
      OneForm w(B);
      w.coeffs[v] = e;
      conormal.push_back(w);
    }
  Distribution cm(B, conormal);
  rep.tangent = true;
  for (const auto& w : c.dist.relations())
    if (!module_normal_form(w, cm).is_zero()) rep.tangent = false;
  return rep;
}

/// Deterministic small-height rationals: 0, 1, -1, 2, -2, 1/2, -1/2, 3, ...
inline std::vector<Rational> sample_rationals(std::size_t count) {
  std::vector<Rational> out{0};
  for (int h = 1; out.size() < count; ++h)
    for (int q = 1; q <= h && out.size() < count; ++q) {
      int p = h - q + 1;
      Rational r(p, q);
      r.canonicalize();
      if (r.get_den() != q) continue;
      out.push_back(r);
      if (out.size() < count) out.push_back(-r);
    }
  out.resize(count);
  return out;
}

}  // namespace folia
