#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "folia/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"folia: quotients of affine varieties by algebraic foliations"};
  app.require_subcommand(1);

  std::string file, chart, map_file, point, window = "-2,2,-2,2";
  int density = 15;
  std::optional<int> degree;

  auto* inv = app.add_subcommand("involutive", "check the distribution is closed under Lie bracket");
  inv->add_option("file", file, "problem file")->required();

  auto* fi = app.add_subcommand("first-integrals", "generators and relations of the first integrals on a chart");
  fi->add_option("file", file, "problem file")->required();
  fi->add_option("--chart", chart, "chart index, or a denominator expression; whole space if omitted");
  fi->add_option("--degree", degree, "degree bound");

  auto* iv = app.add_subcommand("invariance", "check a ring map is invariant");
  iv->add_option("file", file, "problem file")->required();
  iv->add_option("--map", map_file, "map file")->required();

  auto* st = app.add_subcommand("stability", "stability certificate for a chart");
  st->add_option("file", file, "problem file")->required();
  st->add_option("--chart", chart, "chart index, or a denominator expression");

  auto* qu = app.add_subcommand("quotient", "glue the chart quotients into an atlas");
  qu->add_option("file", file, "problem file")->required();

  auto* lf = app.add_subcommand("leaf", "fibre of a chart quotient over a rational point");
  lf->add_option("file", file, "problem file")->required();
  lf->add_option("--chart", chart, "chart index");
  lf->add_option("--point", point, "values of the chart's generators, comma separated")->required();

  auto* pl = app.add_subcommand("plot", "SVG phase portrait of a planar distribution");
  pl->add_option("file", file, "problem file")->required();
  pl->add_option("--window", window, "x0,x1,y0,y1");
  pl->add_option("--density", density, "arrows per axis");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : folia::exit_input;
  }

  try {
    auto p = folia::load_problem_file(file);
    folia::CommandResult r;
    if (*inv) r = folia::cmd_involutive(p);
    else if (*fi) r = folia::cmd_first_integrals(p, chart, degree);
    else if (*iv) r = folia::cmd_invariance(p, folia::read_json_file(map_file));
    else if (*st) r = folia::cmd_stability(p, chart);
    else if (*qu) r = folia::cmd_quotient(p);
    else if (*lf) r = folia::cmd_leaf(p, chart, point);
    else r = folia::cmd_plot(p, window, density);
    std::cout << r.out;
    return r.code;
  } catch (const folia::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return folia::exit_input;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return folia::exit_bound;
  }
}
