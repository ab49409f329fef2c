#pragma once

// Kaehler differentials, distributions F = Omega^1 / N and their duals.

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "folia/ideal.hpp"
#include "folia/poly.hpp"

namespace folia {

/// A vector of ring elements indexed by the base variables; shared shape of
/// one-forms (sum c_i dx_i) and vector fields (sum a_i d/dx_i).
struct Covector {
  RingPtr ring;
  std::vector<Poly> coeffs;

  explicit Covector(RingPtr r) : ring(std::move(r)), coeffs(ring->nvars(), Poly(ring)) {}
  Covector(RingPtr r, std::vector<Poly> c) : ring(std::move(r)), coeffs(std::move(c)) {
    if (coeffs.size() != ring->nvars()) throw std::invalid_argument("wrong number of coefficients");
    for (const auto& p : coeffs)
      if (!same_ring(ring, p.ring())) throw RingMismatch();
  }

  bool is_zero() const {
    for (const auto& c : coeffs)
      if (!c.is_zero()) return false;
    return true;
  }
  const Poly& operator[](std::size_t i) const { return coeffs[i]; }
  std::size_t size() const { return coeffs.size(); }

  friend bool operator==(const Covector& a, const Covector& b) {
    return same_ring(a.ring, b.ring) && a.coeffs == b.coeffs;
  }
};

struct OneForm : Covector {
  using Covector::Covector;
  friend OneForm operator+(const OneForm& a, const OneForm& b) {
    OneForm r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r.coeffs[i] = a[i] + b[i];
    return r;
  }
  friend OneForm operator-(const OneForm& a, const OneForm& b) {
    OneForm r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r.coeffs[i] = a[i] - b[i];
    return r;
  }
  friend OneForm operator*(const Poly& f, const OneForm& a) {
    OneForm r = a;
    for (auto& c : r.coeffs) c = f * c;
    return r;
  }
};

struct VectorField : Covector {
  using Covector::Covector;
  /// The derivation applied to f: sum a_i * df/dx_i.
  Poly apply(const Poly& f) const {
    Poly out(ring);
    for (std::size_t i = 0; i < size(); ++i)
      if (!coeffs[i].is_zero()) out += coeffs[i] * f.derivative(i);
    return out;
  }
};

/// Exterior derivative df = sum (df/dx_i) dx_i.
inline OneForm exterior_d(const Poly& f) {
  OneForm w(f.ring());
  for (std::size_t i = 0; i < w.size(); ++i) w.coeffs[i] = f.derivative(i);
  return w;
}

/// Contraction <omega, v>.
inline Poly pairing(const Covector& w, const Covector& v) {
  if (!same_ring(w.ring, v.ring)) throw RingMismatch();
  Poly out(w.ring);
  for (std::size_t i = 0; i < w.size(); ++i)
    if (!w[i].is_zero() && !v[i].is_zero()) out += w[i] * v[i];
  return out;
}

namespace detail {

inline SVec to_svec(const Covector& c, int offset = 0) {
  SVec out;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (const auto& t : c[i].terms()) out.push_back(Term{static_cast<int>(i) + offset, t.exp, t.coeff});
  sort_and_combine(out, c.ring->order());
  return out;
}

template <class V>
V from_svec(const RingPtr& ring, const SVec& v, int offset = 0) {
  std::vector<SVec> parts(ring->nvars());
  for (const auto& t : v) {
    int p = t.pos - offset;
    if (p < 0 || p >= static_cast<int>(parts.size())) continue;
    parts[p].push_back(Term{0, t.exp, t.coeff});
  }
  std::vector<Poly> coeffs;
  for (auto& p : parts) coeffs.emplace_back(ring, std::move(p));
  return V(ring, std::move(coeffs));
}

/// Generators of the ring's defining ideal placed at every position < npos.
inline std::vector<SVec> defining_module(const RingPtr& ring, int npos) {
  std::vector<SVec> out;
  for (const auto& g : ring->defining_basis())
    for (int p = 0; p < npos; ++p) out.push_back(at_position(g, p));
  return out;
}

/// Makes a vector primitive: integral coefficients with gcd 1 and a positive
/// leading coefficient.
inline SVec primitive(SVec v) {
  if (v.empty()) return v;
  mpz_class den = 1, num = 0;
  for (const auto& t : v) den = lcm(den, mpz_class(t.coeff.get_den()));
  for (const auto& t : v) num = gcd(num, mpz_class(t.coeff.get_num() * (den / t.coeff.get_den())));
  Rational c = Rational(den) / Rational(num);
  if (v.front().coeff < 0) c = -c;
  for (auto& t : v) t.coeff *= c;
  return v;
}

}  // namespace detail

/// Generators of {v in B^n : <row, v> = 0 for every row}, saturated (a kernel
/// of a map into a free module). Each generator is primitive; redundant ones
/// are removed.
template <class V, class Row>
std::vector<V> annihilator(const RingPtr& ring, const std::vector<Row>& rows) {
  const int n = static_cast<int>(ring->nvars());
  const int k = static_cast<int>(rows.size());
  const auto& ord = ring->order();
  // Column j of the relation matrix, stacked on the unit vector e_j. The
  // matrix part sits in the dominating positions n..n+k-1.
  std::vector<SVec> gens;
  for (int j = 0; j < n; ++j) {
    SVec v;
    Exponents one(ring->width(), 0);
    v.push_back(Term{j, one, 1});
    for (int r = 0; r < k; ++r)
      for (const auto& t : rows[r][j].terms()) v.push_back(Term{n + r, t.exp, t.coeff});
    sort_and_combine(v, ord);
    gens.push_back(std::move(v));
  }
  auto extra = detail::defining_module(ring, n + k);
  gens.insert(gens.end(), extra.begin(), extra.end());
  auto gb = groebner_basis(gens, ord, false);

  std::vector<SVec> syz;
  for (const auto& g : gb) {
    if (g.front().pos >= n) continue;
    // Normalize coefficientwise; drop vectors that vanish in the ring.
    V field = detail::from_svec<V>(ring, g);
    if (field.is_zero()) continue;
    syz.push_back(detail::to_svec(field));
  }
  // Remove generators lying in the span of the others.
  auto module_gens = [&](const std::vector<SVec>& list, std::size_t skip) {
    std::vector<SVec> m;
    for (std::size_t i = 0; i < list.size(); ++i)
      if (i != skip) m.push_back(list[i]);
    auto def = detail::defining_module(ring, n);
    m.insert(m.end(), def.begin(), def.end());
    return groebner_basis(m, ord, false);
  };
  for (std::size_t i = syz.size(); i-- > 0;) {
    if (syz.size() <= 1) break;
    auto gb_others = module_gens(syz, i);
    if (reduce(syz[i], gb_others, ord).empty()) syz.erase(syz.begin() + static_cast<long>(i));
  }
  std::vector<V> out;
  for (auto& s : syz) out.push_back(detail::from_svec<V>(ring, detail::primitive(s)));
  return out;
}

/// Generic rank over the fraction field of a matrix with entries in an
/// integral domain; fraction-free elimination by cross multiplication.
inline int generic_rank(std::vector<std::vector<Poly>> m) {
  if (m.empty()) return 0;
  const std::size_t cols = m[0].size();
  int rank = 0;
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < m.size(); ++c) {
    std::size_t piv = m.size();
    for (std::size_t r = row; r < m.size(); ++r)
      if (!m[r][c].is_zero()) {
        piv = r;
        break;
      }
    if (piv == m.size()) continue;
    std::swap(m[row], m[piv]);
    for (std::size_t r = row + 1; r < m.size(); ++r) {
      if (m[r][c].is_zero()) continue;
      Poly a = m[row][c], b = m[r][c];
      for (std::size_t cc = c; cc < cols; ++cc) m[r][cc] = a * m[r][cc] - b * m[row][cc];
    }
    ++row;
    ++rank;
  }
  return rank;
}

/// Determinant by cofactor expansion along the first row.
inline Poly determinant(const std::vector<std::vector<Poly>>& m, const RingPtr& ring) {
  const std::size_t n = m.size();
  if (n == 0) return Poly::constant(ring, 1);
  if (n == 1) return m[0][0];
  Poly out(ring);
  for (std::size_t j = 0; j < n; ++j) {
    if (m[0][j].is_zero()) continue;
    std::vector<std::vector<Poly>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Poly> row;
      for (std::size_t c = 0; c < n; ++c)
        if (c != j) row.push_back(m[r][c]);
      minor.push_back(std::move(row));
    }
    Poly term = m[0][j] * determinant(minor, ring);
    out = (j % 2 == 0) ? out + term : out - term;
  }
  return out;
}

namespace detail {
inline void subsets(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
                    std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}
inline std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  subsets(n, k, 0, cur, out);
  return out;
}
}  // namespace detail

/// All nonzero k x k minors of a matrix (rows x cols).
inline std::vector<Poly> minors(const std::vector<std::vector<Poly>>& m, std::size_t k, const RingPtr& ring) {
  std::vector<Poly> out;
  if (k == 0) return {Poly::constant(ring, 1)};
  if (m.size() < k || m[0].size() < k) return out;
  for (const auto& rs : detail::subsets(m.size(), k))
    for (const auto& cs : detail::subsets(m[0].size(), k)) {
      std::vector<std::vector<Poly>> sub;
      for (auto r : rs) {
        std::vector<Poly> row;
        for (auto c : cs) row.push_back(m[r][c]);
        sub.push_back(std::move(row));
      }
      Poly d = determinant(sub, ring);
      if (!d.is_zero()) out.push_back(d);
    }
  return out;
}

/// Fitting ideal Fitt_k of the cokernel of the presentation whose rows are
/// the relations on `ncols` free generators: the (ncols - k)-minors.
inline Ideal fitting_ideal(const std::vector<std::vector<Poly>>& relations, std::size_t ncols, int k,
                           const RingPtr& ring) {
  int size = static_cast<int>(ncols) - k;
  if (size <= 0) return Ideal(ring, {Poly::constant(ring, 1)});
  return buchberger(Ideal(ring, minors(relations, static_cast<std::size_t>(size), ring)));
}

inline std::vector<std::vector<Poly>> matrix_of(const std::vector<OneForm>& forms) {
  std::vector<std::vector<Poly>> m;
  for (const auto& w : forms) m.push_back(w.coeffs);
  return m;
}

/// A distribution F = Omega^1 / N given by generators of N. The module
/// Groebner basis of N (position over term, later variables dominating) and
/// the rank/corank are computed at construction.
class Distribution {
 public:
  Distribution(RingPtr ring, std::vector<OneForm> relations, bool saturated = false)
      : ring_(std::move(ring)), saturated_(saturated) {
    for (auto& w : relations) {
      if (!same_ring(ring_, w.ring)) throw RingMismatch();
      if (!w.is_zero()) relations_.push_back(std::move(w));
    }
    // Ambient relations r contribute d(r) to the presentation.
    std::vector<OneForm> amb;
    // r itself is zero in the ring, so differentiate its terms directly.
    for (const auto& r : ring_->relations()) {
      OneForm dr(ring_);
      for (std::size_t i = 0; i < ring_->nvars(); ++i) {
        SVec di;
        for (const auto& t : r) {
          if (t.exp[i] == 0) continue;
          Term u = t;
          u.coeff *= t.exp[i];
          u.exp[i] -= 1;
          di.push_back(std::move(u));
        }
        dr.coeffs[i] = Poly(ring_, std::move(di));
      }
      if (!dr.is_zero()) amb.push_back(dr);
    }
    ambient_ = amb;
    auto all = relations_;
    all.insert(all.end(), amb.begin(), amb.end());
    int full = generic_rank(matrix_of(all));
    int base = generic_rank(matrix_of(amb));
    corank_ = full - base;
    rank_ = static_cast<int>(ring_->nvars()) - full;

    std::vector<SVec> gens;
    for (const auto& w : all) gens.push_back(detail::to_svec(w));
    auto def = detail::defining_module(ring_, static_cast<int>(ring_->nvars()));
    gens.insert(gens.end(), def.begin(), def.end());
    basis_ = std::make_shared<const std::vector<SVec>>(groebner_basis(gens, ring_->order(), false));
  }

  const RingPtr& ring() const { return ring_; }
  const std::vector<OneForm>& relations() const { return relations_; }
  /// Relations together with d of the ambient ring relations.
  std::vector<OneForm> all_relations() const {
    auto all = relations_;
    all.insert(all.end(), ambient_.begin(), ambient_.end());
    return all;
  }
  bool saturated() const { return saturated_; }
  int rank() const { return rank_; }
  int corank() const { return corank_; }
  const std::vector<SVec>& module_basis() const { return *basis_; }

 private:
  RingPtr ring_;
  std::vector<OneForm> relations_;
  std::vector<OneForm> ambient_;
  bool saturated_;
  int rank_ = 0, corank_ = 0;
  std::shared_ptr<const std::vector<SVec>> basis_;
};

/// Canonical representative of the class of w in F; zero iff w lies in N.
inline OneForm module_normal_form(const OneForm& w, const Distribution& dist) {
  if (!same_ring(w.ring, dist.ring())) throw RingMismatch();
  SVec r = reduce(detail::to_svec(w), dist.module_basis(), dist.ring()->order());
  return detail::from_svec<OneForm>(dist.ring(), r);
}

/// d_F f: the class of df in F. Zero iff f is a first integral.
inline OneForm foliated_d(const Poly& f, const Distribution& dist) {
  return module_normal_form(exterior_d(f), dist);
}

inline bool is_first_integral(const Poly& f, const Distribution& dist) {
  return foliated_d(f, dist).is_zero();
}

struct RankCorank {
  int rank;
  int corank;
};

inline RankCorank rank_corank(const Distribution& dist) { return {dist.rank(), dist.corank()}; }

/// Generators of T_F = {v : <w, v> = 0 for all w in N}.
inline std::vector<VectorField> dual_vector_fields(const Distribution& dist) {
  return annihilator<VectorField>(dist.ring(), dist.all_relations());
}

/// N_sat = {w : b w in N for some nonzero b}, computed as the annihilator of
/// the annihilator. Returns the input relations when N is already saturated.
inline Distribution saturate_torsion(const Distribution& dist) {
  if (dist.saturated()) return dist;
  auto fields = annihilator<VectorField>(dist.ring(), dist.all_relations());
  auto sat = annihilator<OneForm>(dist.ring(), fields);
  bool same = true;
  for (const auto& w : sat)
    if (!module_normal_form(w, dist).is_zero()) same = false;
  if (same) return Distribution(dist.ring(), dist.relations(), true);
  // Ambient d(r) are re-added by the constructor; keep only the new forms.
  return Distribution(dist.ring(), std::move(sat), true);
}

/// Distribution whose tangent module is generated by the given vector fields.
inline Distribution distribution_from_fields(const RingPtr& ring, const std::vector<VectorField>& fields) {
  return Distribution(ring, annihilator<OneForm>(ring, fields), true);
}

}  // namespace folia
