#pragma once

// Phase portraits of planar distributions: an arrow field sampled on a grid
// plus level sets of first integrals traced by marching squares. Output is
// byte-stable: fixed formatting, no timestamps, elements in a fixed order.

#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "folia/diffmod.hpp"

namespace folia {

/// Value of p at a real point of the base variables; NaN where an inverted
/// element (nearly) vanishes.
inline double evaluate(const Poly& p, const std::vector<double>& x) {
  const auto& R = p.ring();
  const std::size_t n = R->nvars();
  auto mono = [&](const Exponents& e, std::size_t count) {
    double m = 1;
    for (std::size_t i = 0; i < count; ++i) m *= std::pow(x[i], e[i]);
    return m;
  };
  std::vector<double> w;
  for (const auto& f : R->inverted()) {
    double v = 0;
    for (const auto& t : f) v += t.coeff.get_d() * mono(t.exp, n);
    if (std::fabs(v) < 1e-9) return std::nan("");
    w.push_back(1 / v);
  }
  double s = 0;
  for (const auto& t : p.terms()) {
    double m = t.coeff.get_d() * mono(t.exp, n);
    for (std::size_t j = 0; j < w.size(); ++j) m *= std::pow(w[j], t.exp[n + j]);
    s += m;
  }
  return s;
}

struct PlotWindow {
  double x0 = -2, x1 = 2, y0 = -2, y1 = 2;
};

struct LevelSet {
  Poly function;
  std::vector<Rational> values;
};

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s = buf;
  if (s == "-0.00") s = "0.00";
  return s;
}

}  // namespace detail

/// SVG document: arrows of the given vector fields at density x density grid
/// points, then one path per level set.
inline std::string render_svg(const std::vector<VectorField>& fields, const std::vector<LevelSet>& levels,
                              const PlotWindow& win, int density, int size = 400) {
  const double sx = size / (win.x1 - win.x0), sy = size / (win.y1 - win.y0);
  auto px = [&](double x) { return (x - win.x0) * sx; };
  auto py = [&](double y) { return size - (y - win.y0) * sy; };
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\" viewBox=\"0 0 "
    << size << " " << size << "\">\n";
  o << "<rect x=\"0\" y=\"0\" width=\"" << size << "\" height=\"" << size << "\" fill=\"white\" stroke=\"black\"/>\n";

  o << "<g id=\"arrows\" stroke=\"#444\" stroke-width=\"1\" fill=\"none\">\n";
  const double cell = density > 1 ? size / static_cast<double>(density) : size;
  for (int i = 0; i < density; ++i)
    for (int j = 0; j < density; ++j) {
      double x = win.x0 + (i + 0.5) * (win.x1 - win.x0) / density;
      double y = win.y0 + (j + 0.5) * (win.y1 - win.y0) / density;
      for (const auto& v : fields) {
        double a = evaluate(v[0], {x, y}) * sx, b = -evaluate(v[1], {x, y}) * sy;
        double len = std::hypot(a, b);
        if (!(len > 1e-12)) continue;
        double L = 0.4 * cell;
        a *= L / len;
        b *= L / len;
        double cx = px(x), cy = py(y);
        double ex = cx + a / 2, ey = cy + b / 2;
        // Head: two short strokes back from the tip.
        double hx = -a * 0.3, hy = -b * 0.3;
        o << "<path d=\"M" << detail::num(cx - a / 2) << " " << detail::num(cy - b / 2) << " L" << detail::num(ex)
          << " " << detail::num(ey) << " M" << detail::num(ex + hx - hy * 0.5) << " " << detail::num(ey + hy + hx * 0.5)
          << " L" << detail::num(ex) << " " << detail::num(ey) << " L" << detail::num(ex + hx + hy * 0.5) << " "
          << detail::num(ey + hy - hx * 0.5) << "\"/>\n";
      }
    }
  o << "</g>\n";

  // Marching squares on a fixed 80 x 80 grid.
  const int M = 80;
  o << "<g id=\"levels\" stroke=\"#1f5fbf\" stroke-width=\"1.2\" fill=\"none\">\n";
  for (const auto& ls : levels) {
    std::vector<double> grid((M + 1) * (M + 1));
    for (int i = 0; i <= M; ++i)
      for (int j = 0; j <= M; ++j)
        grid[i * (M + 1) + j] = evaluate(ls.function, {win.x0 + i * (win.x1 - win.x0) / M, win.y0 + j * (win.y1 - win.y0) / M});
    for (const auto& c : ls.values) {
      const double level = c.get_d();
      std::ostringstream path;
      for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j) {
          std::array<double, 4> v{grid[i * (M + 1) + j], grid[(i + 1) * (M + 1) + j], grid[(i + 1) * (M + 1) + j + 1],
                                  grid[i * (M + 1) + j + 1]};
          std::array<std::array<double, 2>, 4> corner{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
          bool bad = false;
          for (double t : v) bad = bad || std::isnan(t);
          if (bad) continue;
          std::vector<std::array<double, 2>> cut;
          for (int e = 0; e < 4; ++e) {
            double a = v[e] - level, b = v[(e + 1) % 4] - level;
            if ((a < 0) == (b < 0)) continue;
            double t = a / (a - b);
            const auto& p = corner[e];
            const auto& q = corner[(e + 1) % 4];
            cut.push_back({i + p[0] + t * (q[0] - p[0]), j + p[1] + t * (q[1] - p[1])});
          }
          for (std::size_t s = 0; s + 1 < cut.size(); s += 2) {
            auto X = [&](double gi) { return px(win.x0 + gi * (win.x1 - win.x0) / M); };
            auto Y = [&](double gj) { return py(win.y0 + gj * (win.y1 - win.y0) / M); };
            path << "M" << detail::num(X(cut[s][0])) << " " << detail::num(Y(cut[s][1])) << " L"
                 << detail::num(X(cut[s + 1][0])) << " " << detail::num(Y(cut[s + 1][1])) << " ";
          }
        }
      std::string d = path.str();
      if (d.empty()) continue;
      d.pop_back();
      o << "<path data-level=\"" << c.get_str() << "\" d=\"" << d << "\"/>\n";
    }
  }
  o << "</g>\n</svg>\n";
  return o.str();
}

}  // namespace folia
