#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "folia/diffmod.hpp"
#include "folia/parse.hpp"

namespace th {

using namespace folia;

inline Poly P(const std::string& s, const RingPtr& R) { return parse_poly(s, R); }

inline OneForm form(const RingPtr& R, std::initializer_list<const char*> c) {
  std::vector<Poly> v;
  for (const char* s : c) v.push_back(P(s, R));
  return OneForm(R, std::move(v));
}

inline VectorField field(const RingPtr& R, std::initializer_list<const char*> c) {
  std::vector<Poly> v;
  for (const char* s : c) v.push_back(P(s, R));
  return VectorField(R, std::move(v));
}

inline RingPtr ring(std::initializer_list<const char*> names) {
  return PolyRing::make(std::vector<std::string>(names.begin(), names.end()));
}

inline Distribution parabola(const RingPtr& R) { return Distribution(R, {form(R, {"-2*x", "1"})}); }
inline Distribution radii(const RingPtr& R) { return Distribution(R, {form(R, {"-y", "x"})}); }
inline Distribution hyperbolae(const RingPtr& R) { return Distribution(R, {form(R, {"y", "x"})}); }
// Tangent to -x d/dx + y d/dy + z d/dz.
inline Distribution hyperbolae3d(const RingPtr& R) {
  return distribution_from_fields(R, {field(R, {"-x", "y", "z"})});
}

}  // namespace th
