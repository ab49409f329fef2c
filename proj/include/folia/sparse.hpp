#pragma once

// Sparse vectors over Q[vars] with term-over-position ordering, and the
// Buchberger engine shared by ideals (position 0 only) and free modules.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <set>
#include <utility>
#include <vector>

#include "folia/order.hpp"

namespace folia {

using Rational = mpq_class;

struct Term {
  int pos = 0;
  Exponents exp;
  Rational coeff;
};

/// Terms sorted strictly descending; no zero coefficients.
using SVec = std::vector<Term>;

/// Position-over-term: the larger position dominates, then the monomial order.
inline int compare_terms(const Term& a, const Term& b, const MonomialOrder& ord) {
  if (a.pos != b.pos) return a.pos < b.pos ? -1 : 1;
  return ord.compare(a.exp, b.exp);
}

inline bool same_monomial(const Term& a, const Term& b) {
  return a.pos == b.pos && a.exp == b.exp;
}

inline void sort_and_combine(SVec& v, const MonomialOrder& ord) {
  std::sort(v.begin(), v.end(),
            [&](const Term& a, const Term& b) { return compare_terms(a, b, ord) > 0; });
  SVec out;
  out.reserve(v.size());
  for (auto& t : v) {
    if (!out.empty() && same_monomial(out.back(), t)) {
      out.back().coeff += t.coeff;
      if (out.back().coeff == 0) out.pop_back();
    } else if (t.coeff != 0) {
      out.push_back(std::move(t));
    }
  }
  v = std::move(out);
}

/// a + c * (m * b), where m is a monomial shift.
inline SVec axpy(const SVec& a, const Rational& c, const Exponents* shift, const SVec& b,
                 const MonomialOrder& ord) {
  SVec out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  Term tb;
  auto shifted = [&](std::size_t k) {
    Term t{b[k].pos, shift ? b[k].exp + *shift : b[k].exp, b[k].coeff * c};
    return t;
  };
  bool have_b = false;
  while (i < a.size() || j < b.size() || have_b) {
    if (!have_b && j < b.size()) {
      tb = shifted(j++);
      have_b = true;
    }
    if (i < a.size() && have_b) {
      int cmp = compare_terms(a[i], tb, ord);
      if (cmp > 0) {
        out.push_back(a[i++]);
      } else if (cmp < 0) {
        out.push_back(std::move(tb));
        have_b = false;
      } else {
        Rational s = a[i].coeff + tb.coeff;
        if (s != 0) out.push_back(Term{a[i].pos, a[i].exp, std::move(s)});
        ++i;
        have_b = false;
      }
    } else if (i < a.size()) {
      out.push_back(a[i++]);
    } else if (have_b) {
      out.push_back(std::move(tb));
      have_b = false;
    }
  }
  return out;
}

inline SVec add(const SVec& a, const SVec& b, const MonomialOrder& ord) {
  return axpy(a, Rational(1), nullptr, b, ord);
}

inline SVec sub(const SVec& a, const SVec& b, const MonomialOrder& ord) {
  return axpy(a, Rational(-1), nullptr, b, ord);
}

inline SVec scale(SVec a, const Rational& c) {
  if (c == 0) return {};
  for (auto& t : a) t.coeff *= c;
  return a;
}

inline SVec shift(SVec a, const Exponents& m, const Rational& c) {
  if (c == 0) return {};
  for (auto& t : a) {
    t.exp = t.exp + m;
    t.coeff *= c;
  }
  return a;
}

/// Product of a scalar polynomial (all terms at position 0) with a vector.
inline SVec multiply(const SVec& p, const SVec& v, const MonomialOrder& ord) {
  SVec out;
  out.reserve(p.size() * v.size());
  for (const auto& s : p)
    for (const auto& t : v) out.push_back(Term{t.pos, s.exp + t.exp, s.coeff * t.coeff});
  sort_and_combine(out, ord);
  return out;
}

inline SVec make_monic(SVec v) {
  if (v.empty()) return v;
  Rational inv = 1 / v.front().coeff;
  for (auto& t : v) t.coeff *= inv;
  return v;
}

inline SVec at_position(SVec v, int pos) {
  for (auto& t : v) t.pos = pos;
  return v;
}

inline bool svec_equal(const SVec& a, const SVec& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same_monomial(a[i], b[i]) || a[i].coeff != b[i].coeff) return false;
  return true;
}

/// Strict weak ordering on whole vectors, used for deduplication.
inline bool svec_less(const SVec& a, const SVec& b, const MonomialOrder& ord) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = compare_terms(a[i], b[i], ord);
    if (c != 0) return c < 0;
    if (a[i].coeff != b[i].coeff) return a[i].coeff < b[i].coeff;
  }
  return a.size() < b.size();
}

/// Full reduction of f modulo the list g (any list; unique when g is a reduced
/// Groebner basis).
inline SVec reduce(SVec f, const std::vector<SVec>& g, const MonomialOrder& ord) {
  SVec rem;
  while (!f.empty()) {
    const Term& lead = f.front();
    const SVec* hit = nullptr;
    for (const auto& b : g) {
      if (!b.empty() && b.front().pos == lead.pos && divides(b.front().exp, lead.exp)) {
        hit = &b;
        break;
      }
    }
    if (hit == nullptr) {
      rem.push_back(lead);
      f.erase(f.begin());
      continue;
    }
    Exponents m = lead.exp - hit->front().exp;
    Rational c = -lead.coeff / hit->front().coeff;
    f = axpy(f, c, &m, *hit, ord);
  }
  return rem;
}

namespace detail {

inline SVec s_vector(const SVec& a, const SVec& b, const MonomialOrder& ord) {
  Exponents l = lcm(a.front().exp, b.front().exp);
  Exponents ma = l - a.front().exp;
  Exponents mb = l - b.front().exp;
  SVec sa = shift(a, ma, 1 / a.front().coeff);
  return axpy(sa, -1 / b.front().coeff, &mb, b, ord);
}

inline bool is_unit(const SVec& v) {
  return v.size() == 1 && v.front().pos == 0 && total_degree(v.front().exp) == 0;
}

}  // namespace detail

/// Reduced Groebner basis of the submodule generated by `gens`.
///
/// Pairs are chosen by the normal strategy (smallest lcm first). The chain
/// criterion is always applied; the coprime-leading-monomial criterion only
/// when `ideal` is set, since it does not hold for modules in general.
inline std::vector<SVec> groebner_basis(const std::vector<SVec>& gens, const MonomialOrder& ord,
                                        bool ideal) {
  std::vector<SVec> g;
  for (const auto& f : gens) {
    SVec r = make_monic(reduce(f, g, ord));
    if (r.empty()) continue;
    if (ideal && detail::is_unit(r)) return {r};
    g.push_back(std::move(r));
  }

  std::set<std::pair<std::size_t, std::size_t>> pending;
  for (std::size_t j = 0; j < g.size(); ++j)
    for (std::size_t i = 0; i < j; ++i)
      if (g[i].front().pos == g[j].front().pos) pending.insert({i, j});

  auto pair_lcm = [&](const std::pair<std::size_t, std::size_t>& p) {
    return Term{g[p.first].front().pos, lcm(g[p.first].front().exp, g[p.second].front().exp), 1};
  };

  while (!pending.empty()) {
    auto best = pending.begin();
    Term best_lcm = pair_lcm(*best);
    for (auto it = std::next(pending.begin()); it != pending.end(); ++it) {
      Term l = pair_lcm(*it);
      if (compare_terms(l, best_lcm, ord) < 0) {
        best = it;
        best_lcm = std::move(l);
      }
    }
    auto [i, j] = *best;
    pending.erase(best);

    if (ideal && coprime(g[i].front().exp, g[j].front().exp)) continue;

    bool chain = false;
    for (std::size_t k = 0; k < g.size() && !chain; ++k) {
      if (k == i || k == j || g[k].front().pos != best_lcm.pos) continue;
      if (!divides(g[k].front().exp, best_lcm.exp)) continue;
      auto key = [](std::size_t a, std::size_t b) { return std::make_pair(std::min(a, b), std::max(a, b)); };
      if (!pending.count(key(i, k)) && !pending.count(key(j, k))) chain = true;
    }
    if (chain) continue;

    SVec r = make_monic(reduce(detail::s_vector(g[i], g[j], ord), g, ord));
    if (r.empty()) continue;
    if (ideal && detail::is_unit(r)) return {r};
    std::size_t n = g.size();
    g.push_back(std::move(r));
    for (std::size_t k = 0; k < n; ++k)
      if (g[k].front().pos == g[n].front().pos) pending.insert({k, n});
  }

  // Minimalize, then interreduce.
  std::vector<SVec> minimal;
  for (std::size_t i = 0; i < g.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < g.size() && !redundant; ++j) {
      if (i == j || g[j].front().pos != g[i].front().pos) continue;
      if (!divides(g[j].front().exp, g[i].front().exp)) continue;
      // Equal leading monomials: keep the earlier one.
      if (g[j].front().exp == g[i].front().exp && j > i) continue;
      redundant = true;
    }
    if (!redundant) minimal.push_back(g[i]);
  }
  std::vector<SVec> reduced;
  reduced.reserve(minimal.size());
  for (std::size_t i = 0; i < minimal.size(); ++i) {
    std::vector<SVec> others;
    for (std::size_t j = 0; j < minimal.size(); ++j)
      if (j != i) others.push_back(minimal[j]);
    SVec head{minimal[i].front()};
    SVec tail(minimal[i].begin() + 1, minimal[i].end());
    SVec r = reduce(tail, others, ord);
    head.insert(head.end(), r.begin(), r.end());
    reduced.push_back(make_monic(std::move(head)));
  }
  std::sort(reduced.begin(), reduced.end(), [&](const SVec& a, const SVec& b) {
    return compare_terms(a.front(), b.front(), ord) < 0;
  });
  return reduced;
}

}  // namespace folia
