#pragma once

// Involutivity, Lie brackets, restriction to distinguished opens and
// invariance of ring morphisms.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "folia/diffmod.hpp"
#include "folia/parse.hpp"

namespace folia {

/// A ring map A -> B given by the images of the base variables of A.
class RingMorphism {
 public:
  RingMorphism(RingPtr source, RingPtr target, std::vector<Poly> images)
      : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
    if (images_.size() != source_->nvars()) throw std::invalid_argument("malformed morphism: wrong number of images");
    for (const auto& p : images_)
      if (!same_ring(target_, p.ring())) throw std::invalid_argument("malformed morphism: image outside target ring");
    for (const auto& r : source_->relations()) {
      SVec rr = r;
      for (auto& t : rr) t.exp.resize(source_->nvars());
      if (!apply_polynomial(rr).is_zero())
        throw std::invalid_argument("malformed morphism: a source relation does not map to zero");
    }
    for (std::size_t j = 0; j < source_->ninverted(); ++j) {
      SVec f = source_->inverted()[j];
      for (auto& t : f) t.exp.resize(source_->nvars());
      auto inv = inverse(apply_polynomial(f));
      if (!inv) throw std::invalid_argument("malformed morphism: an inverted element does not map to a unit");
      inverse_images_.push_back(*inv);
    }
  }

  static RingMorphism identity(const RingPtr& ring) {
    std::vector<Poly> im;
    for (std::size_t i = 0; i < ring->nvars(); ++i) im.push_back(Poly::variable(ring, i));
    return RingMorphism(ring, ring, std::move(im));
  }

  const RingPtr& source() const { return source_; }
  const RingPtr& target() const { return target_; }
  const std::vector<Poly>& images() const { return images_; }

  Poly apply(const Poly& p) const {
    if (!same_ring(p.ring(), source_)) throw RingMismatch();
    const std::size_t n = source_->nvars();
    Poly out(target_);
    for (const auto& t : p.terms()) {
      Poly m = Poly::constant(target_, t.coeff);
      for (std::size_t i = 0; i < n; ++i)
        if (t.exp[i] > 0) m = m * images_[i].pow(static_cast<unsigned>(t.exp[i]));
      for (std::size_t j = 0; j < inverse_images_.size(); ++j)
        if (t.exp[n + j] > 0) m = m * inverse_images_[j].pow(static_cast<unsigned>(t.exp[n + j]));
      out += m;
    }
    return out;
  }

  /// g . f: first this, then `next`.
  RingMorphism then(const RingMorphism& next) const {
    if (!same_ring(target_, next.source_)) throw RingMismatch();
    std::vector<Poly> im;
    for (const auto& p : images_) im.push_back(next.apply(p));
    return RingMorphism(source_, next.target_, std::move(im));
  }

 private:
  // Image of a polynomial in the source base variables only.
  Poly apply_polynomial(const SVec& p) const {
    Poly out(target_);
    for (const auto& t : p) {
      Poly m = Poly::constant(target_, t.coeff);
      for (std::size_t i = 0; i < t.exp.size(); ++i)
        if (t.exp[i] > 0) m = m * images_[i].pow(static_cast<unsigned>(t.exp[i]));
      out += m;
    }
    return out;
  }

  RingPtr source_, target_;
  std::vector<Poly> images_;
  std::vector<Poly> inverse_images_;
};

/// [v, w] with coefficient v(w_i) - w(v_i) on d/dx_i.
inline VectorField lie_bracket(const VectorField& v, const VectorField& w) {
  if (!same_ring(v.ring, w.ring)) throw RingMismatch();
  VectorField out(v.ring);
  for (std::size_t i = 0; i < v.size(); ++i) out.coeffs[i] = v.apply(w[i]) - w.apply(v[i]);
  return out;
}

enum class Involutivity { yes, no, yes_generically };

inline const char* to_string(Involutivity v) {
  switch (v) {
    case Involutivity::yes: return "yes";
    case Involutivity::no: return "no";
    case Involutivity::yes_generically: return "yes-generically";
  }
  return "?";
}

struct InvolutivityReport {
  Involutivity verdict = Involutivity::yes;
  std::vector<VectorField> fields;        // generators of T_F
  std::optional<std::pair<std::size_t, std::size_t>> pair;  // offending generator indices
  std::optional<VectorField> bracket;     // the escaping bracket
  std::optional<Poly> denominator;        // for yes_generically: torsion vanishes on D(denominator)
  bool auto_saturated = false;
};

/// First nonzero maximal minor of the relation matrix (size = its generic
/// rank). On D(minor) the relation module is a direct summand.
inline std::optional<Poly> free_locus_minor(const Distribution& dist) {
  auto m = matrix_of(dist.all_relations());
  int r = generic_rank(m);
  if (r == 0) return std::nullopt;
  auto ms = minors(m, static_cast<std::size_t>(r), dist.ring());
  if (ms.empty()) return std::nullopt;
  return ms.front();
}

/// Dual criterion: the generators of T_F must bracket into T_F, i.e. pair to
/// zero with every relation of the saturated distribution.
inline InvolutivityReport is_involutive(const Distribution& input) {
  InvolutivityReport rep;
  Distribution dist = input.saturated() ? input : saturate_torsion(input);
  bool torsion = false;
  if (!input.saturated()) {
    rep.auto_saturated = true;
    for (const auto& w : dist.relations())
      if (!module_normal_form(w, input).is_zero()) torsion = true;
  }
  rep.fields = dual_vector_fields(dist);
  auto rel = dist.all_relations();
  for (std::size_t a = 0; a < rep.fields.size(); ++a)
    for (std::size_t b = a + 1; b < rep.fields.size(); ++b) {
      VectorField br = lie_bracket(rep.fields[a], rep.fields[b]);
      for (const auto& w : rel) {
        if (!pairing(w, br).is_zero()) {
          rep.verdict = Involutivity::no;
          rep.pair = std::make_pair(a, b);
          rep.bracket = br;
          return rep;
        }
      }
    }
  if (torsion) {
    rep.verdict = Involutivity::yes_generically;
    rep.denominator = free_locus_minor(input);
  }
  return rep;
}

/// Coefficients of w ^ dw on dx_i ^ dx_j ^ dx_k for i < j < k.
inline std::vector<Poly> wedge_with_differential(const OneForm& w) {
  const std::size_t n = w.size();
  std::vector<Poly> out;
  auto dd = [&](std::size_t a, std::size_t b) { return w[b].derivative(a) - w[a].derivative(b); };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        out.push_back(w[i] * dd(j, k) - w[j] * dd(i, k) + w[k] * dd(i, j));
  return out;
}

/// Frobenius test for corank-1 distributions: w ^ dw = 0 for a nonzero
/// relation w (the test is insensitive to rescaling w).
inline bool frobenius_corank_one(const Distribution& dist) {
  if (dist.corank() != 1) throw std::invalid_argument("Frobenius shortcut needs corank 1");
  for (const auto& w : dist.all_relations()) {
    if (w.is_zero()) continue;
    for (const auto& c : wedge_with_differential(w))
      if (!c.is_zero()) return false;
    return true;
  }
  return true;
}

inline OneForm embed(const OneForm& w, const RingPtr& target) {
  std::vector<Poly> c;
  for (const auto& p : w.coeffs) c.push_back(embed(p, target));
  return OneForm(target, std::move(c));
}

inline VectorField embed(const VectorField& v, const RingPtr& target) {
  std::vector<Poly> c;
  for (const auto& p : v.coeffs) c.push_back(embed(p, target));
  return VectorField(target, std::move(c));
}

/// The same relation generators over localize(ring, f).
inline Distribution restrict_to_open(const Distribution& dist, const Poly& f) {
  RingPtr sub = localize(dist.ring(), f);
  if (same_ring(sub, dist.ring())) return dist;
  std::vector<OneForm> rel;
  for (const auto& w : dist.relations()) rel.push_back(embed(w, sub));
  return Distribution(sub, std::move(rel), dist.saturated());
}

struct InvarianceReport {
  bool invariant = true;
  std::optional<std::size_t> witness;  // source variable with nonzero d_F
  std::optional<OneForm> derivative;
};

/// phi is F-invariant iff d_F(phi(a_i)) = 0 for every source variable a_i.
inline InvarianceReport is_invariant(const RingMorphism& phi, const Distribution& dist) {
  if (!same_ring(phi.target(), dist.ring())) throw std::invalid_argument("malformed morphism: target is not the distribution's ring");
  InvarianceReport rep;
  for (std::size_t i = 0; i < phi.images().size(); ++i) {
    OneForm d = foliated_d(phi.images()[i], dist);
    if (!d.is_zero()) {
      rep.invariant = false;
      rep.witness = i;
      rep.derivative = d;
      return rep;
    }
  }
  return rep;
}

}  // namespace folia
