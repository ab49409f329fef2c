#pragma once

// Exponent vectors and monomial orders.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace folia {

using Exponents = std::vector<int>;

inline int total_degree(const Exponents& e) {
  return std::accumulate(e.begin(), e.end(), 0);
}

inline bool divides(const Exponents& a, const Exponents& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

inline Exponents lcm(const Exponents& a, const Exponents& b) {
  Exponents r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
  return r;
}

inline bool coprime(const Exponents& a, const Exponents& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > 0 && b[i] > 0) return false;
  return true;
}

inline Exponents operator+(const Exponents& a, const Exponents& b) {
  Exponents r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Exponents operator-(const Exponents& a, const Exponents& b) {
  Exponents r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

/// Block graded-reverse-lexicographic order.
///
/// Every variable belongs to a block; blocks are compared in increasing block
/// index, the first differing block decides. Inside a block monomials compare
/// by degree, then reverse-lexicographically (the later variable with the
/// smaller exponent wins). A single block is plain grevlex, one block per
/// variable is lex, two blocks give an elimination order.
class MonomialOrder {
 public:
  MonomialOrder() = default;

  static MonomialOrder grevlex(std::size_t nvars) {
    return MonomialOrder(std::vector<int>(nvars, 0));
  }

  static MonomialOrder lex(std::size_t nvars) {
    std::vector<int> b(nvars);
    std::iota(b.begin(), b.end(), 0);
    return MonomialOrder(std::move(b));
  }

  explicit MonomialOrder(std::vector<int> block_of_var) : block_(std::move(block_of_var)) {
    int nblocks = 0;
    for (int b : block_) {
      if (b < 0) throw std::invalid_argument("negative block index");
      nblocks = std::max(nblocks, b + 1);
    }
    members_.assign(nblocks, {});
    for (std::size_t v = 0; v < block_.size(); ++v) members_[block_[v]].push_back(v);
  }

  std::size_t size() const { return block_.size(); }
  const std::vector<int>& blocks() const { return block_; }

  /// Negative, zero or positive as a < b, a == b, a > b.
  int compare(const Exponents& a, const Exponents& b) const {
    for (const auto& vars : members_) {
      int da = 0, db = 0;
      for (auto v : vars) {
        da += a[v];
        db += b[v];
      }
      if (da != db) return da < db ? -1 : 1;
      for (auto it = vars.rbegin(); it != vars.rend(); ++it)
        if (a[*it] != b[*it]) return a[*it] < b[*it] ? 1 : -1;
    }
    return 0;
  }

  /// The same order with `extra` trailing variables appended to the last block.
  MonomialOrder extended(std::size_t extra) const {
    auto b = block_;
    int last = members_.empty() ? 0 : static_cast<int>(members_.size()) - 1;
    b.insert(b.end(), extra, last);
    return MonomialOrder(std::move(b));
  }

  friend bool operator==(const MonomialOrder& a, const MonomialOrder& b) {
    return a.block_ == b.block_;
  }

 private:
  std::vector<int> block_;
  std::vector<std::vector<std::size_t>> members_;
};

}  // namespace folia
