#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "folia/cli.hpp"

using namespace folia;

namespace {

std::string problem(const std::string& name) { return std::string(FOLIA_PROBLEM_DIR) + "/" + name; }

std::string golden(const std::string& name) {
  std::ifstream in(std::string(FOLIA_GOLDEN_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ProblemSpec load(const std::string& name) { return load_problem_file(problem(name)); }

Json base() {
  return Json::parse(R"({"ring": {"variables": ["x", "y"]}, "distribution": {"one_forms": [{"x": "-y", "y": "x"}]}})");
}

}  // namespace

TEST(Problem, LoadsCorpus) {
  for (const char* f : {"parabola.json", "radii.json", "hyperbolae.json", "hyperbolae3d.json", "contact.json"}) {
    auto p = load(f);
    EXPECT_FALSE(p.name.empty());
  }
  auto h = load("hyperbolae3d.json");
  EXPECT_TRUE(h.from_fields);
  EXPECT_EQ(h.dist.rank(), 1);
  EXPECT_EQ(h.charts.size(), 3u);
  EXPECT_EQ(h.options.degree_bound, 2);
}

TEST(Problem, SchemaErrors) {
  auto j = base();
  j["distribution"]["vector_fields"] = Json::array();
  EXPECT_THROW(load_problem(j), InputError);
  j = base();
  j["distribution"] = Json::object();
  EXPECT_THROW(load_problem(j), InputError);
  j = base();
  j["distribution"]["one_forms"][0]["q"] = "1";
  EXPECT_THROW(load_problem(j), InputError);
  j = base();
  j["charts"] = {"x - x"};
  EXPECT_THROW(load_problem(j), InputError);
  j = base();
  j["ring"]["variables"] = {"x", "x"};
  EXPECT_THROW(load_problem(j), InputError);
  EXPECT_THROW(load_problem_file(problem("missing.json")), InputError);
}

TEST(Problem, ParseErrorCarriesPosition) {
  auto j = base();
  j["distribution"]["one_forms"][0]["x"] = "x + * y";
  try {
    load_problem(j);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("distribution.one_forms[0].x: column 5"), std::string::npos) << e.what();
  }
}

TEST(Problem, InvertedRing) {
  auto j = base();
  j["ring"]["inverted"] = {"x"};
  auto p = load_problem(j);
  EXPECT_EQ(p.ring->ninverted(), 1u);
  auto r = cmd_first_integrals(p, "", 2);
  EXPECT_NE(r.out.find("\"y/x\""), std::string::npos);
}

TEST(Commands, Involutive) {
  EXPECT_EQ(cmd_involutive(load("radii.json")).code, exit_ok);
  auto c = cmd_involutive(load("contact.json"));
  EXPECT_EQ(c.code, exit_negative);
  EXPECT_EQ(c.out, golden("contact_involutive.json"));
}

TEST(Commands, FirstIntegrals) {
  auto p = cmd_first_integrals(load("parabola.json"), "", 2);
  EXPECT_EQ(p.out, golden("parabola_first_integrals.json"));
  auto radii = load("radii.json");
  auto whole = Json::parse(cmd_first_integrals(radii, "", 6).out);
  EXPECT_TRUE(whole["generators"].empty());
  auto dx = Json::parse(cmd_first_integrals(radii, "0", 2).out);
  EXPECT_EQ(dx["generators"], Json({"y/x"}));
  EXPECT_THROW(cmd_first_integrals(radii, "5", 2), InputError);
  EXPECT_THROW(cmd_first_integrals(radii, "x +", 2), InputError);
}

TEST(Commands, Invariance) {
  auto h = load("hyperbolae.json");
  auto yes = cmd_invariance(h, Json::parse(R"({"source": ["t"], "images": {"t": "x*y"}})"));
  EXPECT_EQ(yes.code, exit_ok);
  auto no = cmd_invariance(h, Json::parse(R"({"source": ["t"], "images": {"t": "x"}})"));
  EXPECT_EQ(no.code, exit_negative);
  EXPECT_EQ(Json::parse(no.out)["witness"], "t");
  EXPECT_THROW(cmd_invariance(h, Json::parse(R"({"source": ["t"], "images": {}})")), InputError);
}

TEST(Commands, Stability) {
  auto h = load("hyperbolae.json");
  auto whole = cmd_stability(h, "");
  EXPECT_EQ(whole.code, exit_negative);
  EXPECT_EQ(Json::parse(whole.out)["smooth"]["witness_ideal"], Json({"y", "x"}));
  EXPECT_EQ(cmd_stability(h, "0").code, exit_ok);
}

TEST(Commands, QuotientGolden) {
  EXPECT_EQ(cmd_quotient(load("radii.json")).out, golden("radii_atlas.json"));
  EXPECT_EQ(cmd_quotient(load("hyperbolae.json")).out, golden("hyperbolae_atlas.json"));
  auto q = cmd_quotient(load("hyperbolae3d.json"));
  EXPECT_EQ(q.code, exit_ok);
  EXPECT_EQ(q.out, golden("hyperbolae3d_atlas.json"));
}

TEST(Commands, QuotientRefusesUnstableChart) {
  auto j = base();
  j["distribution"]["one_forms"][0] = {{"x", "y"}, {"y", "x"}};
  auto r = cmd_quotient(load_problem(j));
  EXPECT_EQ(r.code, exit_negative);
  EXPECT_NE(r.out.find("not certified"), std::string::npos);
}

TEST(Commands, Leaf) {
  auto r = cmd_leaf(load("hyperbolae3d.json"), "0", "0,0");
  EXPECT_EQ(r.code, exit_ok);
  EXPECT_EQ(Json::parse(r.out)["ideal"], Json({"z", "y"}));
  EXPECT_THROW(cmd_leaf(load("hyperbolae3d.json"), "0", "1"), InputError);
  EXPECT_THROW(cmd_leaf(load("hyperbolae3d.json"), "0", "a,b"), InputError);
  auto p = cmd_leaf(load("parabola.json"), "", "3/2");
  EXPECT_EQ(Json::parse(p.out)["ideal"], Json({"x^2 - y - 3/2"}));
}

TEST(Commands, PlotGolden) {
  EXPECT_EQ(cmd_plot(load("radii.json"), "-2,2,-2,2", 9).out, golden("radii.svg"));
  EXPECT_EQ(cmd_plot(load("hyperbolae.json"), "-2,2,-2,2", 9).out, golden("hyperbolae.svg"));
  EXPECT_THROW(cmd_plot(load("hyperbolae3d.json"), "-2,2,-2,2", 9), InputError);
  EXPECT_THROW(cmd_plot(load("radii.json"), "1,0,0,1", 9), InputError);
}

TEST(Commands, PlotZeroField) {
  auto j = base();
  j["distribution"]["one_forms"] = {{{"x", "1"}}, {{"y", "1"}}};
  auto svg = cmd_plot(load_problem(j), "-1,1,-1,1", 4).out;
  EXPECT_NE(svg.find("fill=\"none\">\n</g>"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(Commands, Deterministic) {
  auto p = load("hyperbolae3d.json");
  EXPECT_EQ(cmd_quotient(p).out, cmd_quotient(p).out);
}

TEST(RoundTrip, CorpusPolynomials) {
  for (const char* f : {"parabola.json", "radii.json", "hyperbolae.json", "hyperbolae3d.json"}) {
    auto p = load(f);
    for (const auto& c : detail::problem_charts(p))
      for (const auto& g : c.algebra.generators) EXPECT_EQ(parse_poly(to_string(g), g.ring()), g) << to_string(g);
  }
}
