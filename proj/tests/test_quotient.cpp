#include <gtest/gtest.h>

#include "folia/quotient.hpp"
#include "helpers.hpp"

using namespace th;

namespace {

std::vector<Chart> charts(const Distribution& d, std::initializer_list<const char*> dens, int D = 2) {
  std::vector<Chart> out;
  for (const char* f : dens) out.push_back(make_chart(std::string("D(") + f + ")", d, P(f, d.ring()), D));
  return out;
}

std::vector<std::string> strings(const std::vector<Poly>& v) {
  std::vector<std::string> out;
  for (const auto& p : v) out.push_back(to_string(p));
  return out;
}

using S = std::vector<std::string>;

}  // namespace

TEST(Overlap, Radii) {
  auto R = ring({"x", "y"});
  auto cs = charts(radii(R), {"x", "y"});
  auto t = overlap(cs, 0, 1, 2);
  ASSERT_TRUE(t.has_value());
  EXPECT_EQ(to_string(t->localizer_i), "y/x");
  ASSERT_EQ(t->iso.images().size(), 1u);
  EXPECT_EQ(to_string(t->iso.images()[0]), "1/t1");
}

TEST(Overlap, Hyperbolae) {
  auto R = ring({"x", "y"});
  auto cs = charts(hyperbolae(R), {"x", "y"});
  auto t = overlap(cs, 0, 1, 2);
  ASSERT_TRUE(t.has_value());
  EXPECT_EQ(to_string(t->localizer_i), "x*y");
  EXPECT_EQ(to_string(t->iso.images()[0]), "t1");
  EXPECT_EQ(strings(t->overlap.generators), (S{"1/(x*y)", "x*y"}));
}

TEST(Overlap, Self) {
  auto R = ring({"x", "y"});
  auto cs = charts(radii(R), {"x"});
  auto t = overlap(cs, 0, 0, 2);
  ASSERT_TRUE(t.has_value());
  EXPECT_EQ(to_string(t->localizer_i), "1");
  EXPECT_EQ(to_string(t->iso.images()[0]), "t1");
}

TEST(Atlas, Radii) {
  auto R = ring({"x", "y"});
  auto a = build_atlas(charts(radii(R), {"x", "y"}), 2);
  EXPECT_TRUE(a.coherent);
  EXPECT_TRUE(a.cocycle_ok);
  EXPECT_TRUE(a.separated);
  EXPECT_EQ(a.classification, "projective line");
}

TEST(Atlas, Hyperbolae) {
  auto R = ring({"x", "y"});
  auto a = build_atlas(charts(hyperbolae(R), {"x", "y"}), 2);
  EXPECT_TRUE(a.cocycle_ok);
  EXPECT_FALSE(a.separated);
  ASSERT_TRUE(a.separation_witness.has_value());
  EXPECT_EQ(a.separation_witness->coordinates, "1/t1");
  EXPECT_EQ(a.classification, "line with doubled origin");
}

TEST(Atlas, SingleChart) {
  auto R = ring({"x", "y"});
  auto a = build_atlas(charts(parabola(R), {"1"}), 2);
  EXPECT_TRUE(a.cocycle_ok);
  EXPECT_TRUE(a.separated);
  EXPECT_EQ(a.classification, "affine line");
}

TEST(Atlas, Hyperbolae3d) {
  auto T = ring({"x", "y", "z"});
  auto cs = charts(hyperbolae3d(T), {"x", "y", "z"});
  EXPECT_EQ(strings(cs[0].algebra.generators), (S{"x*z", "x*y"}));
  EXPECT_EQ(strings(cs[1].algebra.generators), (S{"z/y", "x*y"}));
  EXPECT_EQ(strings(cs[2].algebra.generators), (S{"y/z", "x*z"}));
  for (const auto& c : cs) EXPECT_EQ(c.certificate.overall, Verdict::verified) << c.id;
  auto a = build_atlas(cs, 2);
  EXPECT_EQ(a.transitions.size(), 6u);
  EXPECT_TRUE(a.coherent);
  EXPECT_TRUE(a.cocycle_ok) << (a.cocycle_failures.empty() ? "" : a.cocycle_failures[0]);
  EXPECT_FALSE(a.separated);
  EXPECT_EQ(a.classification, "unclassified");
  auto leaf = leaf_fibre(a, 0, {0, 0});
  EXPECT_EQ(strings(leaf.ideal), (S{"z", "y"}));
  EXPECT_TRUE(leaf.smooth);
  EXPECT_TRUE(leaf.tangent);
  EXPECT_TRUE(leaf.dimension_ok);
}

TEST(Leaf, Examples) {
  auto R = ring({"x", "y"});
  auto p = build_atlas(charts(parabola(R), {"1"}), 2);
  auto l = leaf_fibre(p, 0, {0});
  EXPECT_EQ(strings(l.ideal), (S{"x^2 - y"}));
  EXPECT_TRUE(l.smooth);
  EXPECT_TRUE(l.tangent);
  EXPECT_EQ(l.dimension, 1);

  auto h = build_atlas(charts(hyperbolae(R), {"x", "y"}), 2);
  auto lh = leaf_fibre(h, 0, {1});
  EXPECT_EQ(strings(lh.ideal), (S{"x*y - 1"}));
  EXPECT_TRUE(lh.smooth);
  EXPECT_EQ(lh.irreducible, Verdict::verified);
  EXPECT_THROW(leaf_fibre(h, 0, {1, 2}), std::invalid_argument);
}

TEST(Leaf, SampledFibres) {
  auto R = ring({"x", "y"});
  auto a = build_atlas(charts(radii(R), {"x", "y"}), 2);
  for (std::size_t k = 0; k < 2; ++k)
    for (const auto& c : sample_rationals(6)) {
      auto l = leaf_fibre(a, k, {c});
      EXPECT_FALSE(l.empty);
      EXPECT_TRUE(l.smooth && l.tangent && l.dimension_ok) << k << " " << c.get_str();
    }
}

TEST(Atlas, RejectsUncertified) {
  auto R = ring({"x", "y"});
  EXPECT_THROW(build_atlas(charts(hyperbolae(R), {"1"}), 2), std::invalid_argument);
}

TEST(SampleRationals, Deterministic) {
  auto s = sample_rationals(7);
  EXPECT_EQ(s[0], 0);
  EXPECT_EQ(s[1], 1);
  EXPECT_EQ(s[2], -1);
  EXPECT_EQ(s.size(), 7u);
}
