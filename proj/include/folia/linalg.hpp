#pragma once

// Exact sparse linear algebra over Q: reduced row echelon form and nullspaces.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

namespace folia {

using Rational = mpq_class;

/// Sparse row: (column, value) pairs sorted by column, no zeros.
using SparseRow = std::vector<std::pair<std::size_t, Rational>>;

namespace detail {

inline SparseRow row_axpy(const SparseRow& a, const Rational& c, const SparseRow& b) {
  SparseRow out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, c * b[j].second);
      ++j;
    } else {
      Rational v = a[i].second + c * b[j].second;
      if (v != 0) out.emplace_back(a[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

inline Rational row_at(const SparseRow& r, std::size_t col) {
  auto it = std::lower_bound(r.begin(), r.end(), col,
                             [](const auto& e, std::size_t c) { return e.first < c; });
  if (it != r.end() && it->first == col) return it->second;
  return 0;
}

}  // namespace detail

/// Reduced row echelon form. The pivot of each row is its leftmost nonzero
/// column; rows are returned in increasing pivot order, normalized to pivot 1.
inline std::vector<SparseRow> rref(std::vector<SparseRow> rows) {
  std::vector<SparseRow> basis;  // kept sorted by pivot column
  for (auto& r : rows) {
    // Reduce against existing pivots.
    for (const auto& b : basis) {
      if (r.empty()) break;
      Rational v = detail::row_at(r, b.front().first);
      if (v != 0) r = detail::row_axpy(r, -v, b);
    }
    if (r.empty()) continue;
    Rational inv = 1 / r.front().second;
    for (auto& e : r) e.second *= inv;
    // Back-substitute the new pivot into earlier rows.
    for (auto& b : basis) {
      Rational v = detail::row_at(b, r.front().first);
      if (v != 0) b = detail::row_axpy(b, -v, r);
    }
    auto pos = std::lower_bound(basis.begin(), basis.end(), r.front().first,
                                [](const SparseRow& b, std::size_t c) { return b.front().first < c; });
    basis.insert(pos, std::move(r));
  }
  return basis;
}

/// Basis of {x : A x = 0} for A given by rows over `ncols` columns. Each basis
/// vector has a 1 at one free column and zeros at the other free columns.
inline std::vector<SparseRow> nullspace(const std::vector<SparseRow>& rows, std::size_t ncols) {
  auto r = rref(rows);
  std::vector<bool> pivot(ncols, false);
  for (const auto& row : r) pivot[row.front().first] = true;
  std::vector<SparseRow> out;
  for (std::size_t f = 0; f < ncols; ++f) {
    if (pivot[f]) continue;
    std::map<std::size_t, Rational> v;
    v[f] = 1;
    for (const auto& row : r) {
      Rational c = detail::row_at(row, f);
      if (c != 0) v[row.front().first] = -c;
    }
    out.emplace_back(v.begin(), v.end());
  }
  return out;
}

}  // namespace folia
