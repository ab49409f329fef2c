#pragma once

// Stability certificates for a chart U -> V = Spec A: smoothness, relative
// dimension and connectedness of fibres, each verified, refuted or unknown.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "folia/diffmod.hpp"
#include "folia/first_integrals.hpp"
#include "folia/foliation.hpp"
#include "folia/ideal.hpp"
#include "folia/linalg.hpp"
#include "folia/parse.hpp"

namespace folia {

enum class Verdict { verified, refuted, unknown };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::verified: return "verified";
    case Verdict::refuted: return "refuted";
    case Verdict::unknown: return "unknown";
  }
  return "?";
}

struct Check {
  Verdict verdict = Verdict::unknown;
  std::string detail;
  std::vector<Poly> witness_ideal;  // reduced basis, when a locus is the witness
  std::optional<int> value;         // computed integer, e.g. a relative dimension
  std::optional<Poly> witness_element;
  std::optional<Poly> witness_polynomial;
};

namespace detail {

/// Jacobian criterion for Spec of free/(eqs), eqs a reduced basis of a prime
/// ideal: true when the codimension-size minors of the Jacobian together with
/// the equations generate the unit ideal.
inline bool jacobian_smooth(const RingPtr& free, const std::vector<Poly>& eqs) {
  if (eqs.empty()) return true;
  Ideal J = buchberger(Ideal(free, eqs));
  int dim = krull_dimension(J);
  if (dim < 0) return true;  // empty
  std::size_t c = free->nvars() - static_cast<std::size_t>(dim);
  std::vector<std::vector<Poly>> jac;
  for (const auto& e : J.basis()) jac.push_back(exterior_d(e).coeffs);
  auto gens = J.basis();
  for (auto& m : minors(jac, c, free)) gens.push_back(std::move(m));
  return is_unit_ideal(Ideal(free, gens));
}

inline bool ambient_smooth(const RingPtr& B) {
  if (B->relations().empty()) return true;
  RingPtr free = B->free_cover();
  std::vector<Poly> eqs;
  for (const auto& r : B->relations()) {
    SVec v = r;
    for (auto& t : v) t.exp.resize(free->width());
    eqs.push_back(Poly(free, std::move(v)));
  }
  return jacobian_smooth(free, eqs);
}

inline int ambient_dimension(const RingPtr& B) {
  return krull_dimension(B->defining_basis(), B->width());
}

}  // namespace detail

/// Smoothness and relative dimension of Spec B -> Spec A where A = Q[t]/J
/// and t_j maps to images[j].
///
/// With g the generic rank of Omega_{B/A}: relative dimension is verified iff
/// g = r. Smoothness is verified when A and B pass the Jacobian criterion,
/// dim B - dim A = g and Fitt_g(Omega_{B/A}) = (1): the fibres then all have
/// dimension g, so the map is flat, and Omega_{B/A} locally free of rank g
/// makes it smooth. It is refuted with the locus V(Fitt_g) when that ideal is
/// proper, and unknown otherwise.
inline std::pair<Check, Check> check_smooth_and_dimension(const RingPtr& tags, const std::vector<Poly>& relations,
                                                          const RingPtr& B, const std::vector<Poly>& images, int r) {
  const std::size_t n = B->nvars();
  std::vector<OneForm> rows;
  for (const auto& p : images) {
    if (!same_ring(p.ring(), B)) throw std::invalid_argument("malformed morphism: image outside target ring");
    rows.push_back(exterior_d(p));
  }
  Distribution rel(B, rows);  // adds d of B's own relations
  auto matrix = matrix_of(rel.all_relations());
  const int g = static_cast<int>(n) - generic_rank(matrix);

  Check dim;
  dim.value = g;
  dim.verdict = g == r ? Verdict::verified : Verdict::refuted;
  dim.detail = "generic rank of Omega_{B/A} is " + std::to_string(g) + ", rank F is " + std::to_string(r);

  Check smooth;
  Ideal fitt = fitting_ideal(matrix, n, g, B);
  if (!is_unit_ideal(fitt)) {
    smooth.verdict = Verdict::refuted;
    smooth.witness_ideal = fitt.basis();
    smooth.detail = "Omega_{B/A} jumps rank on V(Fitt_" + std::to_string(g) + ")";
    return {smooth, dim};
  }
  Ideal J = buchberger(Ideal(tags, relations));
  const bool a_smooth = detail::jacobian_smooth(tags, J.basis());
  const int dim_a = relations.empty() && images.empty() ? 0 : krull_dimension(J);
  const int dim_b = detail::ambient_dimension(B);
  if (!a_smooth || !detail::ambient_smooth(B)) {
    smooth.detail = "Jacobian criterion inconclusive on the source or target";
  } else if (dim_b - dim_a != g) {
    smooth.detail = "fibre dimension " + std::to_string(dim_b - dim_a) + " differs from rank of Omega_{B/A}";
  } else {
    smooth.verdict = Verdict::verified;
    smooth.detail = "A and B regular, equidimensional fibres, Fitt_" + std::to_string(g) + "(Omega_{B/A}) = (1)";
  }
  return {smooth, dim};
}

inline std::pair<Check, Check> check_smooth_and_dimension(const RingMorphism& phi, int r) {
  const auto& A = phi.source();
  if (A->ninverted() > 0) throw std::invalid_argument("malformed morphism: source must be a quotient of a free ring");
  RingPtr tags = A->free_cover();
  std::vector<Poly> rel;
  for (const auto& x : A->relations()) {
    SVec v = x;
    for (auto& t : v) t.exp.resize(tags->width());
    rel.push_back(Poly(tags, std::move(v)));
  }
  return check_smooth_and_dimension(tags, rel, phi.target(), phi.images(), r);
}

/// Searches for b in B of degree <= d_alg that is algebraic over Frac(A) but
/// not in A. Algebraic dependence is the Jacobian condition: every
/// (k+1)-minor of [dg; db] vanishes, k the rank of [dg]. Those minors are
/// linear in b, so the candidates form the nullspace of one linear system.
/// Refuted when such b exists (witness b and its minimal relation, with b as
/// the last tag); verified when none does and the algebra is certified
/// complete; unknown otherwise.
inline Check connected_fibres_probe(const FirstIntegralAlgebra& alg, int d_alg) {
  const RingPtr& B = alg.ambient;
  Check c;
  c.value = d_alg;
  std::vector<std::vector<Poly>> dg;
  for (const auto& g : alg.generators) dg.push_back(exterior_d(g).coeffs);
  const int k = dg.empty() ? 0 : generic_rank(dg);
  auto cand = candidate_elements(B, d_alg);

  std::map<std::pair<std::size_t, Exponents>, std::size_t> slot;
  std::vector<SparseRow> rows;
  for (std::size_t j = 0; j < cand.size(); ++j) {
    auto m = dg;
    m.push_back(exterior_d(cand[j]).coeffs);
    auto ms = minors(m, static_cast<std::size_t>(k + 1), B);
    for (std::size_t q = 0; q < ms.size(); ++q)
      for (const auto& t : ms[q].terms()) {
        auto [it, fresh] = slot.emplace(std::make_pair(q, t.exp), rows.size());
        if (fresh) rows.emplace_back();
        rows[it->second].emplace_back(j, t.coeff);
      }
  }
  std::vector<Poly> algebraic;
  for (const auto& v : nullspace(rows, cand.size())) {
    Poly b(B);
    for (const auto& [j, x] : v) b += x * cand[j];
    algebraic.push_back(b);
  }
  auto basis = echelon_basis(B, algebraic);
  // Smallest witness first.
  for (auto it = basis.rbegin(); it != basis.rend(); ++it) {
    const Poly& b = *it;
    if (subalgebra_membership(b, alg).member) continue;
    c.verdict = Verdict::refuted;
    c.witness_element = b;
    auto with = alg.generators;
    with.push_back(b);
    auto rel = SubalgebraEngine(B, with).relations().basis();
    // Lowest degree in the new tag among relations that involve it.
    const std::size_t last = with.size() - 1;
    std::optional<Poly> best;
    int best_deg = 0;
    for (const auto& p : rel) {
      int d = 0;
      for (const auto& t : p.terms()) d = std::max(d, t.exp[last]);
      if (d > 0 && (!best || d < best_deg)) {
        best = p;
        best_deg = d;
      }
    }
    c.witness_polynomial = best;
    c.detail = "element algebraic over the quotient but not in it";
    return c;
  }
  if (alg.complete) {
    c.verdict = Verdict::verified;
    c.detail = "no algebraic element outside A up to degree " + std::to_string(d_alg);
  } else {
    c.detail = "search bound exhausted; first-integral algebra not certified complete";
  }
  return c;
}

struct StabilityCertificate {
  std::string chart_id;
  Check smooth;
  Check relative_dimension;
  Check connected_fibres;
  Check invariant;
  Check distribution_free;  // Fitt_r(F) = (1) on the chart
  Verdict overall = Verdict::unknown;
  std::vector<std::string> trusted;
};

/// Certificate for the chart map Spec B -> Spec A given by `alg`, where B is
/// the chart's ring and `dist` the distribution restricted to it.
inline StabilityCertificate certify_chart(const std::string& id, const Distribution& dist,
                                          const FirstIntegralAlgebra& alg, int d_alg = 3) {
  if (!same_ring(dist.ring(), alg.ambient)) throw RingMismatch();
  StabilityCertificate cert;
  cert.chart_id = id;
  auto [smooth, dim] =
      check_smooth_and_dimension(alg.tag_ring, alg.relations.basis(), alg.ambient, alg.generators, dist.rank());
  cert.smooth = smooth;
  cert.relative_dimension = dim;
  cert.connected_fibres = connected_fibres_probe(alg, d_alg);

  cert.invariant.verdict = Verdict::verified;
  for (std::size_t i = 0; i < alg.generators.size(); ++i)
    if (!is_first_integral(alg.generators[i], dist)) {
      cert.invariant.verdict = Verdict::refuted;
      cert.invariant.detail = "t" + std::to_string(i + 1) + " is not a first integral";
      break;
    }

  const std::size_t n = dist.ring()->nvars();
  Ideal fr = fitting_ideal(matrix_of(dist.all_relations()), n, dist.rank(), dist.ring());
  if (is_unit_ideal(fr)) {
    cert.distribution_free.verdict = Verdict::verified;
  } else {
    cert.distribution_free.verdict = Verdict::refuted;
    cert.distribution_free.witness_ideal = fr.basis();
    cert.distribution_free.detail = "F is not locally free on V(Fitt_r(F))";
  }

  std::vector<Verdict> all{cert.smooth.verdict, cert.relative_dimension.verdict, cert.connected_fibres.verdict,
                           cert.invariant.verdict};
  cert.overall = Verdict::verified;
  for (auto v : all)
    if (v == Verdict::refuted) cert.overall = Verdict::refuted;
  if (cert.overall == Verdict::verified)
    for (auto v : all)
      if (v == Verdict::unknown) cert.overall = Verdict::unknown;
  cert.trusted = {"universally open: smooth maps are flat and of finite presentation",
                  "fibres are leaves: smooth with geometrically irreducible fibres"};
  return cert;
}

}  // namespace folia
