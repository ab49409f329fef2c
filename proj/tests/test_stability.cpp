#include <gtest/gtest.h>

#include "folia/stability.hpp"
#include "helpers.hpp"

using namespace th;

namespace {

StabilityCertificate certify(const Distribution& d, int D = 2) {
  return certify_chart("c", d, compute_algebra(d, D));
}

}  // namespace

TEST(SmoothAndDimension, Examples) {
  auto R = ring({"x", "y"});
  auto T = ring({"t"});
  auto Rx = localize(R, P("x", R));
  auto [s1, d1] = check_smooth_and_dimension(RingMorphism(T, Rx, {P("x*y", Rx)}), 1);
  EXPECT_EQ(s1.verdict, Verdict::verified);
  EXPECT_EQ(d1.verdict, Verdict::verified);

  auto [s2, d2] = check_smooth_and_dimension(RingMorphism(T, R, {P("x*y", R)}), 1);
  EXPECT_EQ(s2.verdict, Verdict::refuted);
  ASSERT_EQ(s2.witness_ideal.size(), 2u);
  EXPECT_EQ(to_string(s2.witness_ideal[0]), "y");
  EXPECT_EQ(to_string(s2.witness_ideal[1]), "x");

  auto [s3, d3] = check_smooth_and_dimension(RingMorphism::identity(R), 0);
  EXPECT_EQ(s3.verdict, Verdict::verified);
  EXPECT_EQ(d3.verdict, Verdict::verified);
  EXPECT_EQ(*d3.value, 0);
}

TEST(ConnectedFibres, Examples) {
  auto R = ring({"x", "y"});
  auto Rx = localize(R, P("x", R));
  EXPECT_EQ(connected_fibres_probe(compute_algebra(hyperbolae(Rx), 2), 3).verdict, Verdict::verified);
  EXPECT_EQ(connected_fibres_probe(compute_algebra(radii(Rx), 2), 3).verdict, Verdict::verified);

  auto X = ring({"x"});
  auto c = connected_fibres_probe(make_algebra(X, {P("x^2", X)}, 2, true), 3);
  EXPECT_EQ(c.verdict, Verdict::refuted);
  EXPECT_EQ(to_string(*c.witness_element), "x");
  EXPECT_EQ(to_string(*c.witness_polynomial), "t2^2 - t1");
}

TEST(CertifyChart, Examples) {
  auto R = ring({"x", "y"});
  EXPECT_EQ(certify(radii(localize(R, P("x", R)))).overall, Verdict::verified);
  auto whole = certify(radii(R), 6);
  EXPECT_EQ(whole.overall, Verdict::refuted);
  EXPECT_EQ(whole.distribution_free.verdict, Verdict::refuted);
  ASSERT_EQ(whole.distribution_free.witness_ideal.size(), 2u);

  auto S = ring({"x", "y", "z"});
  auto c3 = certify(restrict_to_open(hyperbolae3d(S), P("y", S)));
  EXPECT_EQ(c3.overall, Verdict::verified);
  EXPECT_EQ(c3.distribution_free.verdict, Verdict::verified);
}

TEST(CertifyChart, Monotone) {
  auto R = ring({"x", "y"});
  for (const char* f : {"x", "y"})
    for (const char* g : {"x", "y", "x*y"}) {
      auto d = radii(R);
      auto df = restrict_to_open(d, P(f, R));
      ASSERT_EQ(certify(df).overall, Verdict::verified);
      auto dfg = restrict_to_open(d, P(std::string(f) + "*" + g, R));
      EXPECT_EQ(certify(dfg).overall, Verdict::verified) << f << " " << g;
    }
}

TEST(CertifyChart, GenericStability) {
  auto R = ring({"x", "y"});
  EXPECT_EQ(certify(parabola(R)).overall, Verdict::verified);
  EXPECT_EQ(certify(hyperbolae(localize(R, P("x", R)))).overall, Verdict::verified);
}
