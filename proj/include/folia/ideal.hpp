#pragma once

// Ideals, Groebner bases, normal forms, elimination and Krull dimension.

#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "folia/poly.hpp"

namespace folia {

class Ideal {
 public:
  Ideal(RingPtr ring, std::vector<Poly> generators) : ring_(std::move(ring)) {
    for (auto& g : generators) {
      if (!same_ring(ring_, g.ring())) throw RingMismatch();
      if (!g.is_zero()) gens_.push_back(std::move(g));
    }
  }
  explicit Ideal(RingPtr ring) : ring_(std::move(ring)) {}

  const RingPtr& ring() const { return ring_; }
  const std::vector<Poly>& generators() const { return gens_; }
  bool has_basis() const { return gb_ != nullptr; }

  /// Reduced Groebner basis in the internal model, including the ring's
  /// defining ideal. Computed by buchberger().
  const std::vector<SVec>& raw_basis() const {
    if (!gb_) throw std::logic_error("Groebner basis not computed");
    return *gb_;
  }

  /// Basis elements that are not already zero in the ring, as ring elements.
  std::vector<Poly> basis() const {
    std::vector<Poly> out;
    for (const auto& g : raw_basis()) {
      Poly p(ring_, g);
      if (!p.is_zero()) out.push_back(p.monic());
    }
    return out;
  }

  friend Ideal buchberger(const Ideal& I);

 private:
  RingPtr ring_;
  std::vector<Poly> gens_;
  std::shared_ptr<const std::vector<SVec>> gb_;
};

/// Ideal with its reduced Groebner basis populated. Idempotent.
inline Ideal buchberger(const Ideal& I) {
  if (I.gb_) return I;
  Ideal out = I;
  std::vector<SVec> gens = I.ring_->defining_generators();
  for (const auto& g : I.gens_) gens.push_back(g.terms());
  out.gb_ = std::make_shared<const std::vector<SVec>>(groebner_basis(gens, I.ring_->order(), true));
  return out;
}

inline Poly normal_form(const Poly& f, const Ideal& I) {
  if (!same_ring(f.ring(), I.ring())) throw RingMismatch();
  if (f.is_zero()) return f;
  const Ideal& J = I.has_basis() ? I : buchberger(I);
  if (&J == &I) return Poly(f.ring(), reduce(f.terms(), I.raw_basis(), f.ring()->order()));
  return Poly(f.ring(), reduce(f.terms(), J.raw_basis(), f.ring()->order()));
}

inline bool contains(const Ideal& I, const Poly& f) { return normal_form(f, I).is_zero(); }

inline bool is_unit_ideal(const Ideal& I) {
  Ideal J = buchberger(I);
  return J.raw_basis().size() == 1 && detail::is_unit(J.raw_basis()[0]);
}

/// Krull dimension of Q[internal vars]/I computed from the leading monomials
/// (maximal size of a variable set containing no leading monomial). For a
/// localized ring this is the dimension of the localized quotient. -1 for the
/// unit ideal.
inline int krull_dimension(const std::vector<SVec>& gb, std::size_t width) {
  if (gb.size() == 1 && detail::is_unit(gb[0])) return -1;
  std::vector<std::set<std::size_t>> supports;
  for (const auto& g : gb) {
    std::set<std::size_t> s;
    for (std::size_t v = 0; v < width; ++v)
      if (g.front().exp[v] > 0) s.insert(v);
    supports.push_back(std::move(s));
  }
  int best = 0;
  for (unsigned long mask = 0; mask < (1ul << width); ++mask) {
    int size = __builtin_popcountl(mask);
    if (size <= best) continue;
    bool independent = true;
    for (const auto& s : supports) {
      bool inside = true;
      for (auto v : s)
        if (!(mask >> v & 1ul)) inside = false;
      if (inside) {
        independent = false;
        break;
      }
    }
    if (independent) best = size;
  }
  return best;
}

inline int krull_dimension(const Ideal& I) {
  Ideal J = buchberger(I);
  return krull_dimension(J.raw_basis(), I.ring()->width());
}

/// eliminate(I, keep): I intersected with Q[keep], as an ideal of the free
/// ring on `keep` (in the ring's variable order). Rabinowitsch variables and
/// all other base variables are eliminated.
inline Ideal eliminate(const Ideal& I, const std::vector<std::string>& keep) {
  const auto& R = I.ring();
  std::vector<bool> kept(R->width(), false);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < R->nvars(); ++i) {
    bool k = false;
    for (const auto& name : keep) k = k || name == R->variables()[i];
    kept[i] = k;
    if (k) names.push_back(R->variables()[i]);
  }
  for (const auto& name : keep)
    if (!R->index_of(name)) throw std::invalid_argument("cannot keep unknown variable '" + name + "'");
  if (names.empty()) throw std::invalid_argument("elimination must keep at least one variable");

  std::vector<int> blocks(R->width());
  for (std::size_t v = 0; v < R->width(); ++v) blocks[v] = kept[v] ? 1 : 0;
  MonomialOrder ord(blocks);
  std::vector<SVec> gens = R->defining_generators();
  for (const auto& g : I.generators()) gens.push_back(g.terms());
  for (auto& g : gens) sort_and_combine(g, ord);
  auto gb = groebner_basis(gens, ord, true);

  auto sub = PolyRing::make(names, R->order_kind());
  std::vector<Poly> out;
  for (const auto& g : gb) {
    bool only_kept = true;
    for (const auto& t : g)
      for (std::size_t v = 0; v < R->width(); ++v)
        if (t.exp[v] != 0 && !kept[v]) only_kept = false;
    if (!only_kept) continue;
    SVec p;
    for (const auto& t : g) {
      Exponents e;
      for (std::size_t v = 0; v < R->width(); ++v)
        if (kept[v]) e.push_back(t.exp[v]);
      p.push_back(Term{0, e, t.coeff});
    }
    out.push_back(Poly(sub, std::move(p)));
  }
  return buchberger(Ideal(sub, std::move(out)));
}

}  // namespace folia
