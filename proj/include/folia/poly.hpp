#pragma once

// Polynomial rings over Q, optionally with relations and with inverted
// elements (localizations), and their elements.
//
// A localization at f_1..f_k is realized as Q[x_1..x_n, w_1..w_k] modulo the
// relations and w_j*f_j - 1. Elements are kept in normal form with respect to
// the reduced Groebner basis of that defining ideal, so structural equality is
// equality in the ring.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "folia/order.hpp"
#include "folia/sparse.hpp"

namespace folia {

class PolyRing;
using RingPtr = std::shared_ptr<const PolyRing>;

struct RingMismatch : std::logic_error {
  RingMismatch() : std::logic_error("operands live in different polynomial rings") {}
};

class PolyRing {
 public:
  enum class Order { grevlex, lex };

  /// Free polynomial ring Q[vars].
  static RingPtr make(std::vector<std::string> vars, Order order = Order::grevlex) {
    return std::shared_ptr<const PolyRing>(new PolyRing(std::move(vars), {}, {}, order));
  }

  /// Q[vars]/(relations); relations are written in the free ring on `vars`.
  static RingPtr with_relations(std::vector<std::string> vars, std::vector<SVec> relations,
                                Order order = Order::grevlex) {
    return std::shared_ptr<const PolyRing>(
        new PolyRing(std::move(vars), std::move(relations), {}, order));
  }

  std::size_t nvars() const { return vars_.size(); }
  std::size_t ninverted() const { return inverted_.size(); }
  /// Variables of the internal polynomial model: base variables then one
  /// Rabinowitsch variable per inverted element.
  std::size_t width() const { return vars_.size() + inverted_.size(); }

  const std::vector<std::string>& variables() const { return vars_; }
  /// Inverted elements, as vectors of width() with zero Rabinowitsch exponents.
  const std::vector<SVec>& inverted() const { return inverted_; }
  const std::vector<SVec>& relations() const { return relations_; }
  Order order_kind() const { return order_kind_; }
  const MonomialOrder& order() const { return order_; }

  /// Reduced Groebner basis of the defining ideal in the internal model.
  const std::vector<SVec>& defining_basis() const { return defining_gb_; }
  /// Raw generators of the defining ideal (relations and w_j*f_j - 1).
  std::vector<SVec> defining_generators() const {
    std::vector<SVec> g = relations_;
    for (std::size_t j = 0; j < inverted_.size(); ++j) {
      Exponents w(width(), 0);
      w[vars_.size() + j] = 1;
      SVec r = shift(inverted_[j], w, 1);
      Term one{0, Exponents(width(), 0), -1};
      r = add(r, SVec{one}, order_);
      g.push_back(std::move(r));
    }
    return g;
  }

  bool is_trivial() const { return defining_gb_.size() == 1 && detail::is_unit(defining_gb_[0]); }
  bool is_free() const { return relations_.empty() && inverted_.empty(); }

  std::optional<std::size_t> index_of(const std::string& name) const {
    auto it = std::find(vars_.begin(), vars_.end(), name);
    if (it == vars_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - vars_.begin());
  }

  /// Canonical representative of a vector of width() exponents.
  SVec normalize(SVec v) const {
    if (defining_gb_.empty()) return v;
    return reduce(std::move(v), defining_gb_, order_);
  }

  /// Structural equality: same variables, relations, inverted elements, order.
  friend bool operator==(const PolyRing& a, const PolyRing& b) {
    if (&a == &b) return true;
    if (a.vars_ != b.vars_ || a.order_kind_ != b.order_kind_) return false;
    auto eq = [](const std::vector<SVec>& x, const std::vector<SVec>& y) {
      if (x.size() != y.size()) return false;
      for (std::size_t i = 0; i < x.size(); ++i)
        if (!svec_equal(x[i], y[i])) return false;
      return true;
    };
    return eq(a.relations_, b.relations_) && eq(a.inverted_, b.inverted_);
  }

  /// Ring with one more inverted element (width() exponents, no Rabinowitsch
  /// variables). Used by localize().
  RingPtr with_inverted(const SVec& f) const {
    std::vector<SVec> inv;
    for (const auto& g : inverted_) inv.push_back(strip_to(g, vars_.size()));
    inv.push_back(strip_to(f, vars_.size()));
    std::vector<SVec> rel;
    for (const auto& r : relations_) rel.push_back(strip_to(r, vars_.size()));
    return std::shared_ptr<const PolyRing>(new PolyRing(vars_, std::move(rel), std::move(inv), order_kind_));
  }

  /// Same ring presentation without inverted elements.
  RingPtr without_inverted() const {
    std::vector<SVec> rel;
    for (const auto& r : relations_) rel.push_back(strip_to(r, vars_.size()));
    return std::shared_ptr<const PolyRing>(new PolyRing(vars_, std::move(rel), {}, order_kind_));
  }

  /// Same ring presentation without relations or inverted elements.
  RingPtr free_cover() const { return make(vars_, order_kind_); }

  /// Name used when printing the j-th Rabinowitsch variable in raw form.
  std::string rabinowitsch_name(std::size_t j) const { return "_w" + std::to_string(j + 1); }

 private:
  PolyRing(std::vector<std::string> vars, std::vector<SVec> relations, std::vector<SVec> inverted,
           Order order)
      : vars_(std::move(vars)), order_kind_(order) {
    if (vars_.empty()) throw std::invalid_argument("a polynomial ring needs at least one variable");
    for (std::size_t i = 0; i < vars_.size(); ++i)
      for (std::size_t j = i + 1; j < vars_.size(); ++j)
        if (vars_[i] == vars_[j]) throw std::invalid_argument("duplicate variable name '" + vars_[i] + "'");
    std::size_t k = inverted.size();
    MonomialOrder base = order == Order::grevlex ? MonomialOrder::grevlex(vars_.size())
                                                 : MonomialOrder::lex(vars_.size());
    order_ = base.extended(k);
    for (auto& r : relations) relations_.push_back(pad(std::move(r), k));
    for (auto& f : inverted) {
      if (f.empty()) throw std::invalid_argument("cannot invert the zero polynomial");
      inverted_.push_back(pad(std::move(f), k));
    }
    for (auto& r : relations_) sort_and_combine(r, order_);
    for (auto& f : inverted_) sort_and_combine(f, order_);
    auto gens = defining_generators();
    if (!gens.empty()) defining_gb_ = groebner_basis(gens, order_, true);
  }

  SVec pad(SVec v, std::size_t k) const {
    for (auto& t : v) t.exp.resize(vars_.size() + k, 0);
    return v;
  }

  static SVec strip_to(SVec v, std::size_t n) {
    for (auto& t : v) t.exp.resize(n);
    return v;
  }

  std::vector<std::string> vars_;
  std::vector<SVec> relations_;
  std::vector<SVec> inverted_;
  Order order_kind_;
  MonomialOrder order_;
  std::vector<SVec> defining_gb_;
};

inline bool same_ring(const RingPtr& a, const RingPtr& b) { return a == b || *a == *b; }

/// An element of a PolyRing, always in canonical form.
class Poly {
 public:
  explicit Poly(RingPtr ring) : ring_(std::move(ring)) {}

  /// Wraps terms of width ring->width(); normalizes them.
  Poly(RingPtr ring, SVec terms) : ring_(std::move(ring)) {
    sort_and_combine(terms, ring_->order());
    terms_ = ring_->normalize(std::move(terms));
  }

  static Poly constant(RingPtr ring, const Rational& c) {
    if (c == 0) return Poly(std::move(ring));
    Exponents e(ring->width(), 0);
    return Poly(ring, SVec{Term{0, e, c}});
  }

  static Poly variable(RingPtr ring, std::size_t i) {
    Exponents e(ring->width(), 0);
    e.at(i) = 1;
    return Poly(ring, SVec{Term{0, e, 1}});
  }

  static Poly variable(RingPtr ring, const std::string& name) {
    auto i = ring->index_of(name);
    if (!i) throw std::invalid_argument("unknown variable '" + name + "'");
    return variable(std::move(ring), *i);
  }

  /// The inverse of the j-th inverted element.
  static Poly inverse_of_inverted(RingPtr ring, std::size_t j) {
    Exponents e(ring->width(), 0);
    e.at(ring->nvars() + j) = 1;
    return Poly(ring, SVec{Term{0, e, 1}});
  }

  /// The j-th inverted element itself.
  static Poly inverted_element(RingPtr ring, std::size_t j) {
    return Poly(ring, ring->inverted().at(j));
  }

  const RingPtr& ring() const { return ring_; }
  const SVec& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && total_degree(terms_[0].exp) == 0); }
  Rational constant_term() const {
    if (!terms_.empty() && total_degree(terms_.back().exp) == 0) return terms_.back().coeff;
    return 0;
  }
  /// Maximum total degree over all internal variables; -1 for zero.
  int degree() const {
    int d = -1;
    for (const auto& t : terms_) d = std::max(d, total_degree(t.exp));
    return d;
  }
  const Term& leading_term() const { return terms_.front(); }
  /// True when no term involves a Rabinowitsch variable.
  bool is_polynomial() const {
    for (const auto& t : terms_)
      for (std::size_t j = ring_->nvars(); j < t.exp.size(); ++j)
        if (t.exp[j] != 0) return false;
    return true;
  }

  Poly monic() const { return terms_.empty() ? *this : Poly(ring_, make_monic(terms_), raw_tag{}); }

  Poly operator-() const { return Poly(ring_, scale(terms_, -1), raw_tag{}); }

  friend Poly operator+(const Poly& a, const Poly& b) {
    a.check(b);
    return Poly(a.ring_, add(a.terms_, b.terms_, a.ring_->order()), raw_tag{});
  }
  friend Poly operator-(const Poly& a, const Poly& b) {
    a.check(b);
    return Poly(a.ring_, sub(a.terms_, b.terms_, a.ring_->order()), raw_tag{});
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    a.check(b);
    return Poly(a.ring_, multiply(a.terms_, b.terms_, a.ring_->order()));
  }
  friend Poly operator*(const Rational& c, const Poly& p) { return Poly(p.ring_, scale(p.terms_, c), raw_tag{}); }
  friend Poly operator*(const Poly& p, const Rational& c) { return c * p; }

  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  Poly pow(unsigned k) const {
    Poly r = constant(ring_, 1), base = *this;
    while (k) {
      if (k & 1u) r = r * base;
      k >>= 1u;
      if (k) base = base * base;
    }
    return r;
  }

  /// Partial derivative along base variable i. On localized rings the
  /// Rabinowitsch variables follow d(w) = -w^2 d(f).
  Poly derivative(std::size_t i) const {
    const std::size_t n = ring_->nvars();
    SVec out;
    std::vector<SVec> dw;  // dw_j/dx_i = -w_j^2 * df_j/dx_i, computed lazily
    for (const auto& t : terms_) {
      if (t.exp[i] > 0) {
        Term d = t;
        d.coeff *= t.exp[i];
        d.exp[i] -= 1;
        out.push_back(std::move(d));
      }
    }
    sort_and_combine(out, ring_->order());
    for (std::size_t j = 0; j < ring_->ninverted(); ++j) {
      SVec part;
      for (const auto& t : terms_) {
        if (t.exp[n + j] == 0) continue;
        Term d = t;
        d.coeff *= t.exp[n + j];
        d.exp[n + j] -= 1;
        part.push_back(std::move(d));
      }
      if (part.empty()) continue;
      sort_and_combine(part, ring_->order());
      SVec df;
      for (const auto& t : ring_->inverted()[j]) {
        if (t.exp[i] == 0) continue;
        Term d = t;
        d.coeff *= -t.exp[i];
        d.exp[i] -= 1;
        d.exp[n + j] += 2;
        df.push_back(std::move(d));
      }
      sort_and_combine(df, ring_->order());
      out = add(out, multiply(part, df, ring_->order()), ring_->order());
    }
    return Poly(ring_, std::move(out));
  }

  friend bool operator==(const Poly& a, const Poly& b) {
    return same_ring(a.ring_, b.ring_) && svec_equal(a.terms_, b.terms_);
  }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  void check(const Poly& o) const {
    if (!same_ring(ring_, o.ring_)) throw RingMismatch();
  }

 private:
  struct raw_tag {};
  // Linear combinations of normal forms are normal forms: skip reduction.
  Poly(RingPtr ring, SVec terms, raw_tag) : ring_(std::move(ring)), terms_(std::move(terms)) {}

  RingPtr ring_;
  SVec terms_;
};

/// Orders polynomials by their term lists; used for canonical sorting.
inline bool poly_less(const Poly& a, const Poly& b) {
  return svec_less(a.terms(), b.terms(), a.ring()->order());
}

/// Inverse of h in its ring, if h is a unit.
inline std::optional<Poly> inverse(const Poly& h) {
  const auto& R = h.ring();
  if (h.is_zero()) return std::nullopt;
  if (h.is_constant()) return Poly::constant(R, 1 / h.terms()[0].coeff);
  // Eliminate a fresh variable s placed in a dominating block: s*h - 1 plus
  // the defining ideal. h is a unit iff the basis holds s - q; then q = 1/h.
  const std::size_t w = R->width();
  std::vector<int> blocks(w + 1, 1);
  blocks[w] = 0;
  for (std::size_t v = 0; v < w; ++v) blocks[v] = 1 + R->order().blocks()[v];
  MonomialOrder ord(blocks);
  auto widen = [&](SVec v) {
    for (auto& t : v) t.exp.push_back(0);
    sort_and_combine(v, ord);
    return v;
  };
  std::vector<SVec> gens;
  Exponents s(w + 1, 0);
  s[w] = 1;
  SVec sh = shift(widen(h.terms()), s, 1);
  sh.push_back(Term{0, Exponents(w + 1, 0), -1});
  sort_and_combine(sh, ord);
  gens.push_back(sh);
  for (const auto& g : R->defining_generators()) gens.push_back(widen(g));
  auto gb = groebner_basis(gens, ord, true);
  for (const auto& g : gb) {
    if (g.front().exp != s) continue;
    SVec q;
    for (std::size_t k = 1; k < g.size(); ++k) {
      if (g[k].exp[w] != 0) return std::nullopt;
      Term t = g[k];
      t.exp.pop_back();
      t.coeff = -t.coeff;
      q.push_back(std::move(t));
    }
    return Poly(R, std::move(q));
  }
  return std::nullopt;
}

/// Numerator of a localized element: h times a product of inverted elements,
/// free of Rabinowitsch variables. Returns h itself on rings without inverses.
inline Poly clear_denominators(const Poly& h) {
  const auto& R = h.ring();
  Poly p = h;
  for (std::size_t j = 0; j < R->ninverted(); ++j) {
    int e = 0;
    for (const auto& t : h.terms()) e = std::max(e, t.exp[R->nvars() + j]);
    if (e > 0) p = p * Poly::inverted_element(R, j).pow(static_cast<unsigned>(e));
  }
  if (!p.is_polynomial()) throw std::domain_error("could not clear denominators");
  return p;
}

/// localize(R, f): the ring R_f, with f appended to the inverted elements.
///
/// Constants and elements that are already units return R itself. A monomial
/// numerator is split into its variables, so D(x*y) is modeled as inverting x
/// and y separately.
inline RingPtr localize(const RingPtr& R, const Poly& f) {
  if (!same_ring(R, f.ring())) throw RingMismatch();
  if (f.is_zero()) throw std::invalid_argument("cannot localize at zero");
  if (f.is_constant() || inverse(f)) return R;
  Poly num = clear_denominators(f);
  auto strip = [&](const SVec& v) {
    SVec out = v;
    for (auto& t : out) t.exp.resize(R->width());
    return out;
  };
  if (num.terms().size() == 1) {
    RingPtr cur = R;
    const auto& e = num.terms()[0].exp;
    for (std::size_t i = 0; i < R->nvars(); ++i) {
      if (e[i] == 0) continue;
      Poly xi = Poly::variable(cur, i);
      if (inverse(xi)) continue;
      cur = cur->with_inverted(strip(xi.terms()));
    }
    return cur;
  }
  return R->with_inverted(strip(make_monic(num.terms())));
}

/// Maps an element into a ring whose base variables include those of its own
/// ring (matched by name) and whose inverted elements extend its own.
inline Poly embed(const Poly& p, const RingPtr& target) {
  const auto& S = p.ring();
  if (same_ring(S, target)) return p;
  std::vector<std::size_t> map(S->width());
  for (std::size_t i = 0; i < S->nvars(); ++i) {
    auto j = target->index_of(S->variables()[i]);
    if (!j) throw std::invalid_argument("variable '" + S->variables()[i] + "' missing in target ring");
    map[i] = *j;
  }
  for (std::size_t j = 0; j < S->ninverted(); ++j) {
    // Find the same inverted element in the target (up to variable renaming).
    bool found = false;
    for (std::size_t k = 0; k < target->ninverted() && !found; ++k) {
      SVec a = S->inverted()[j];
      SVec mapped;
      for (const auto& t : a) {
        Exponents e(target->width(), 0);
        for (std::size_t i = 0; i < S->nvars(); ++i) e[map[i]] = t.exp[i];
        mapped.push_back(Term{0, e, t.coeff});
      }
      sort_and_combine(mapped, target->order());
      if (svec_equal(mapped, target->inverted()[k])) {
        map[S->nvars() + j] = target->nvars() + k;
        found = true;
      }
    }
    if (!found) {
      // Fall back to an explicit inverse in the target.
      map[S->nvars() + j] = static_cast<std::size_t>(-1);
    }
  }
  Poly out(target);
  for (const auto& t : p.terms()) {
    Exponents e(target->width(), 0);
    Poly extra = Poly::constant(target, 1);
    for (std::size_t i = 0; i < S->width(); ++i) {
      if (t.exp[i] == 0) continue;
      if (map[i] != static_cast<std::size_t>(-1)) {
        e[map[i]] += t.exp[i];
      } else {
        Poly fi = embed(Poly(S->without_inverted(), [&] {
                          SVec v = S->inverted()[i - S->nvars()];
                          for (auto& u : v) u.exp.resize(S->nvars());
                          return v;
                        }()),
                        target);
        auto inv = inverse(fi);
        if (!inv) throw std::invalid_argument("inverted element is not a unit in the target ring");
        extra = extra * inv->pow(static_cast<unsigned>(t.exp[i]));
      }
    }
    out += Poly(target, SVec{Term{0, e, t.coeff}}) * extra;
  }
  return out;
}

}  // namespace folia
