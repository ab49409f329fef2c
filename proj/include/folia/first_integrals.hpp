#pragma once

// Rings of first integrals on a chart: degree-bounded kernel of d_F,
// generators and relations of the algebra they span, subalgebra membership,
// and the algebraic-closedness and localization probes.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "folia/diffmod.hpp"
#include "folia/foliation.hpp"
#include "folia/ideal.hpp"
#include "folia/linalg.hpp"
#include "folia/parse.hpp"

namespace folia {

/// Fresh tag names t1..tm.
inline std::vector<std::string> tag_names(std::size_t m) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < m; ++i) out.push_back("t" + std::to_string(i + 1));
  return out;
}

/// Membership in Q[g_1..g_m] inside the ambient ring, by normal forms modulo
/// (t_i - g_i) and the ambient defining ideal under an order eliminating the
/// ambient variables.
class SubalgebraEngine {
 public:
  SubalgebraEngine(RingPtr ambient, std::vector<Poly> gens)
      : ambient_(std::move(ambient)), gens_(std::move(gens)) {
    const std::size_t w = ambient_->width(), m = gens_.size();
    tag_ring_ = PolyRing::make(tag_names(std::max<std::size_t>(m, 1)));
    std::vector<int> blocks;
    int top = 0;
    for (std::size_t v = 0; v < w; ++v) {
      blocks.push_back(ambient_->order().blocks()[v]);
      top = std::max(top, blocks.back() + 1);
    }
    for (std::size_t i = 0; i < m; ++i) blocks.push_back(top);
    order_ = MonomialOrder(blocks);

    std::vector<SVec> g;
    for (const auto& d : ambient_->defining_generators()) g.push_back(widen(d));
    for (std::size_t i = 0; i < m; ++i) {
      if (!same_ring(gens_[i].ring(), ambient_)) throw RingMismatch();
      SVec v = scale(widen(gens_[i].terms()), -1);
      Exponents t(w + m, 0);
      t[w + i] = 1;
      v.push_back(Term{0, t, 1});
      sort_and_combine(v, order_);
      g.push_back(std::move(v));
    }
    basis_ = groebner_basis(g, order_, true);
  }

  const RingPtr& ambient() const { return ambient_; }
  const std::vector<Poly>& generators() const { return gens_; }
  /// Free ring on the tags (a single dummy tag when there are no generators).
  const RingPtr& tag_ring() const { return tag_ring_; }

  /// p with p(g) = b, or nullopt when b is not in the subalgebra.
  std::optional<Poly> express(const Poly& b) const {
    if (!same_ring(b.ring(), ambient_)) throw RingMismatch();
    SVec r = reduce(widen(b.terms()), basis_, order_);
    const std::size_t w = ambient_->width();
    SVec p;
    for (const auto& t : r) {
      for (std::size_t v = 0; v < w; ++v)
        if (t.exp[v] != 0) return std::nullopt;
      Exponents e(t.exp.begin() + static_cast<long>(w), t.exp.end());
      if (e.empty()) e.assign(1, 0);
      p.push_back(Term{0, e, t.coeff});
    }
    return Poly(tag_ring_, std::move(p));
  }

  bool contains(const Poly& b) const { return express(b).has_value(); }

  /// Kernel of t_i -> g_i.
  Ideal relations() const {
    const std::size_t w = ambient_->width();
    std::vector<Poly> rel;
    for (const auto& g : basis_) {
      bool only_tags = true;
      for (const auto& t : g)
        for (std::size_t v = 0; v < w; ++v)
          if (t.exp[v] != 0) only_tags = false;
      if (!only_tags) continue;
      SVec p;
      for (const auto& t : g) p.push_back(Term{0, Exponents(t.exp.begin() + static_cast<long>(w), t.exp.end()), t.coeff});
      if (gens_.empty()) continue;
      rel.push_back(Poly(tag_ring_, std::move(p)));
    }
    return buchberger(Ideal(tag_ring_, std::move(rel)));
  }

 private:
  SVec widen(SVec v) const {
    for (auto& t : v) t.exp.resize(ambient_->width() + gens_.size(), 0);
    sort_and_combine(v, order_);
    return v;
  }

  RingPtr ambient_;
  std::vector<Poly> gens_;
  RingPtr tag_ring_;
  MonomialOrder order_;
  std::vector<SVec> basis_;
};

struct FirstIntegralAlgebra {
  RingPtr ambient;
  std::vector<Poly> generators;
  RingPtr tag_ring;
  Ideal relations;
  int degree_bound = 0;
  bool complete = false;
  std::shared_ptr<const SubalgebraEngine> engine;

  std::size_t size() const { return generators.size(); }

  /// Q[t]/relations as a ring of its own (the affine coordinate ring of the
  /// chart's quotient).
  RingPtr quotient_ring() const {
    std::vector<SVec> rel;
    for (const auto& r : relations.basis()) rel.push_back(r.terms());
    return PolyRing::with_relations(tag_ring->variables(), std::move(rel));
  }

  /// Embedding A -> B, t_i -> g_i.
  RingMorphism embedding() const {
    return RingMorphism(quotient_ring(), ambient, generators);
  }
};

inline FirstIntegralAlgebra make_algebra(RingPtr ambient, std::vector<Poly> gens, int degree_bound, bool complete) {
  auto engine = std::make_shared<const SubalgebraEngine>(ambient, gens);
  RingPtr tags = gens.empty() ? PolyRing::make({"t1"}) : engine->tag_ring();
  Ideal rel = gens.empty() ? Ideal(tags, {}) : engine->relations();
  return FirstIntegralAlgebra{std::move(ambient), std::move(gens), tags, buchberger(rel), degree_bound, complete,
                              std::move(engine)};
}

/// Candidate elements of bounded degree: numerator monomials of degree <= D
/// in the base variables times denominators prod f_j^(-e_j) with e_j <= D.
/// Normalized and deduplicated, in a deterministic order.
inline std::vector<Poly> candidate_elements(const RingPtr& ring, int D) {
  const std::size_t n = ring->nvars(), k = ring->ninverted();
  std::vector<Exponents> nums;
  Exponents e(n, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i == n) {
      nums.push_back(e);
      return;
    }
    for (int a = 0; a <= left; ++a) {
      e[i] = a;
      rec(i + 1, left - a);
    }
    e[i] = 0;
  };
  rec(0, D);
  std::vector<Exponents> dens(1, Exponents(k, 0));
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<Exponents> next;
    for (const auto& d : dens)
      for (int a = 0; a <= D; ++a) {
        Exponents x = d;
        x[j] = a;
        next.push_back(std::move(x));
      }
    dens = std::move(next);
  }
  const auto& ord = ring->order();
  std::vector<Poly> out;
  auto less = [&](const Poly& a, const Poly& b) { return svec_less(a.terms(), b.terms(), ord); };
  std::vector<Poly> all;
  for (const auto& num : nums)
    for (const auto& den : dens) {
      Exponents x(ring->width(), 0);
      for (std::size_t i = 0; i < n; ++i) x[i] = num[i];
      for (std::size_t j = 0; j < k; ++j) x[n + j] = den[j];
      Poly p(ring, SVec{Term{0, x, 1}});
      if (!p.is_zero()) all.push_back(p.monic());
    }
  std::sort(all.begin(), all.end(), less);
  for (auto& p : all)
    if (out.empty() || !(out.back() == p)) out.push_back(std::move(p));
  return out;
}

/// Reduced row echelon basis of the span of `polys`: columns are monomials in
/// descending ring order, so each element's pivot is its leading term.
inline std::vector<Poly> echelon_basis(const RingPtr& ring, const std::vector<Poly>& polys) {
  const auto& ord = ring->order();
  auto cmp = [&](const Exponents& a, const Exponents& b) { return ord.compare(a, b) > 0; };
  std::map<Exponents, std::size_t, decltype(cmp)> cols(cmp);
  for (const auto& p : polys)
    for (const auto& t : p.terms()) cols.emplace(t.exp, 0);
  std::vector<Exponents> col_exp;
  std::size_t idx = 0;
  for (auto& [e, c] : cols) {
    c = idx++;
    col_exp.push_back(e);
  }
  std::vector<SparseRow> rows;
  for (const auto& p : polys) {
    SparseRow r;
    for (const auto& t : p.terms()) r.emplace_back(cols.at(t.exp), t.coeff);
    std::sort(r.begin(), r.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    rows.push_back(std::move(r));
  }
  std::vector<Poly> out;
  for (const auto& r : rref(std::move(rows))) {
    SVec v;
    for (const auto& [c, x] : r) v.push_back(Term{0, col_exp[c], x});
    out.push_back(Poly(ring, std::move(v)));
  }
  return out;
}

/// Basis of {f : deg f <= D, d_F f = 0}, echelonized; always contains 1.
inline std::vector<Poly> kernel_space(const Distribution& dist, int D) {
  if (D < 0) throw std::invalid_argument("degree bound must be nonnegative");
  const auto& ring = dist.ring();
  auto cand = candidate_elements(ring, D);
  // Matrix columns are candidates; rows are (position, monomial) slots of d_F.
  std::map<std::pair<int, Exponents>, std::size_t> slot;
  std::vector<std::vector<std::pair<std::size_t, Rational>>> by_row;
  for (std::size_t c = 0; c < cand.size(); ++c) {
    SVec d = reduce(detail::to_svec(exterior_d(cand[c])), dist.module_basis(), ring->order());
    for (const auto& t : d) {
      auto [it, inserted] = slot.emplace(std::make_pair(t.pos, t.exp), by_row.size());
      if (inserted) by_row.emplace_back();
      by_row[it->second].emplace_back(c, t.coeff);
    }
  }
  std::vector<SparseRow> rows(by_row.begin(), by_row.end());
  auto null = nullspace(rows, cand.size());
  std::vector<Poly> elems;
  for (const auto& v : null) {
    Poly p(ring);
    for (const auto& [c, x] : v) p += x * cand[c];
    if (!p.is_zero()) elems.push_back(p);
  }
  return echelon_basis(ring, elems);
}

namespace detail {

inline bool leading_less(const Poly& a, const Poly& b) {
  return compare_terms(a.leading_term(), b.leading_term(), a.ring()->order()) < 0;
}

/// Generator normalization: no constant term, monic.
inline Poly generator_form(const Poly& p) {
  Poly q = p - Poly::constant(p.ring(), p.constant_term());
  return q.monic();
}

}  // namespace detail

/// Greedy reduced generators of the span of `elements` (lowest leading term
/// first), dropping anything already in the subalgebra of earlier picks, then
/// removing generators made redundant by later ones.
inline std::vector<Poly> reduce_generators(const RingPtr& ring, std::vector<Poly> elements) {
  std::sort(elements.begin(), elements.end(), detail::leading_less);
  std::vector<Poly> gens;
  for (const auto& e : elements) {
    if (e.is_constant()) continue;
    Poly g = detail::generator_form(e);
    if (!gens.empty() && SubalgebraEngine(ring, gens).contains(g)) continue;
    gens.push_back(g);
  }
  for (std::size_t i = gens.size(); i-- > 0 && gens.size() > 1;) {
    std::vector<Poly> others;
    for (std::size_t j = 0; j < gens.size(); ++j)
      if (j != i) others.push_back(gens[j]);
    if (SubalgebraEngine(ring, others).contains(gens[i])) gens.erase(gens.begin() + static_cast<long>(i));
  }
  return gens;
}

/// Generators and relations of the first-integral algebra found at degree
/// bound D. `complete` is the heuristic certificate: the algebra has Krull
/// dimension corank F and kernel_space(D + 1) adds nothing new.
inline FirstIntegralAlgebra compute_algebra(const Distribution& input, int D) {
  Distribution dist = input.saturated() ? input : saturate_torsion(input);
  auto gens = reduce_generators(dist.ring(), kernel_space(dist, D));
  FirstIntegralAlgebra alg = make_algebra(dist.ring(), gens, D, false);
  int dim = gens.empty() ? 0 : krull_dimension(alg.relations);
  if (dim == dist.corank()) {
    bool nothing_new = true;
    for (const auto& b : kernel_space(dist, D + 1))
      if (!b.is_constant() && !alg.engine->contains(b)) {
        nothing_new = false;
        break;
      }
    alg.complete = nothing_new;
  }
  return alg;
}

struct Membership {
  bool member = false;
  std::optional<Poly> expression;  // p in the tag ring with p(g) = b
};

inline Membership subalgebra_membership(const Poly& b, const FirstIntegralAlgebra& alg) {
  if (b.is_constant()) return {true, Poly::constant(alg.tag_ring, b.constant_term())};
  if (alg.generators.empty()) return {false, std::nullopt};
  auto p = alg.engine->express(b);
  return {p.has_value(), p};
}

/// Jacobian rank of a list of elements (rows d g_i) over the fraction field.
inline int jacobian_rank(const std::vector<Poly>& elems) {
  std::vector<std::vector<Poly>> m;
  for (const auto& g : elems) m.push_back(exterior_d(g).coeffs);
  return generic_rank(m);
}

struct ClosednessReport {
  bool passed = true;
  int samples = 0;
  int algebraic_random = 0;  // random elements of B found algebraic over A
  std::uint64_t seed = 0;
  std::optional<Poly> witness_root;
  std::optional<std::string> witness_polynomial;
};

/// Property probe for algebraic closedness of A in B. Three in four samples
/// build a monic p(t) = (t - b)(t - c) with b, c random elements of A and
/// check the root b is a first integral; the rest draw a random b in B of
/// degree <= dmax and, when b is algebraic over Frac(A) by the Jacobian
/// criterion, require d_F b = 0.
inline ClosednessReport closedness_probe(const FirstIntegralAlgebra& alg, const Distribution& dist, int samples,
                                         int dmax, std::uint64_t seed) {
  ClosednessReport rep;
  rep.seed = seed;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coef(-3, 3);
  const auto& B = alg.ambient;
  const int base_rank = jacobian_rank(alg.generators);
  auto cand = candidate_elements(B, std::max(dmax, 1));
  std::uniform_int_distribution<std::size_t> pick(0, cand.size() - 1);

  auto random_in_algebra = [&] {
    Poly p = Poly::constant(B, coef(rng));
    for (int k = 0; k < 3 && !alg.generators.empty(); ++k) {
      Poly m = Poly::constant(B, coef(rng));
      std::uniform_int_distribution<std::size_t> g(0, alg.generators.size() - 1);
      std::uniform_int_distribution<int> e(1, std::max(dmax, 1));
      m = m * alg.generators[g(rng)].pow(static_cast<unsigned>(e(rng)));
      p += m;
    }
    return p;
  };

  for (int s = 0; s < samples; ++s) {
    ++rep.samples;
    if (s % 4 != 3) {
      Poly b = random_in_algebra(), c = random_in_algebra();
      // p(t) = t^2 - (b + c) t + b c; check p(b) = 0 and d_F b = 0.
      Poly pb = b * b - (b + c) * b + b * c;
      if (!pb.is_zero() || !is_first_integral(b, dist)) {
        rep.passed = false;
        rep.witness_root = b;
        rep.witness_polynomial = "t^2 - (" + to_string(b + c) + ")*t + (" + to_string(b * c) + ")";
        return rep;
      }
    } else {
      Poly b(B);
      for (int k = 0; k < 3; ++k) b += Rational(coef(rng)) * cand[pick(rng)];
      std::vector<Poly> with = alg.generators;
      with.push_back(b);
      if (jacobian_rank(with) != base_rank) continue;
      ++rep.algebraic_random;
      if (!is_first_integral(b, dist)) {
        rep.passed = false;
        rep.witness_root = b;
        rep.witness_polynomial = "algebraic over the first-integral algebra (Jacobian rank criterion)";
        return rep;
      }
    }
  }
  return rep;
}

struct LocalizationReport {
  bool passed = true;
  FirstIntegralAlgebra global;
  FirstIntegralAlgebra local;
  std::optional<Poly> failing_generator;
};

/// Checks that every generator found on D(f) lies in the localization of the
/// algebra found on the whole chart: f^k g is in Q[A] for some k <= 2D + 2.
inline LocalizationReport localization_check(const Distribution& dist, const Poly& f, int D) {
  if (!is_first_integral(f, dist)) throw std::invalid_argument("localization_check needs a first integral");
  auto global = compute_algebra(dist, D);
  Distribution local_dist = restrict_to_open(dist, f);
  auto local = compute_algebra(local_dist, D);
  LocalizationReport rep{true, global, local, std::nullopt};
  const auto& L = local_dist.ring();
  std::vector<Poly> img;
  for (const auto& g : global.generators) img.push_back(embed(g, L));
  Poly fl = embed(f, L);
  SubalgebraEngine engine(L, img);
  for (const auto& g : local.generators) {
    Poly cur = g;
    bool found = false;
    for (int k = 0; k <= 2 * D + 2 && !found; ++k) {
      if (cur.is_constant() || (!img.empty() && engine.contains(cur))) found = true;
      cur = cur * fl;
    }
    if (!found) {
      rep.passed = false;
      rep.failing_generator = g;
      return rep;
    }
  }
  return rep;
}

}  // namespace folia
