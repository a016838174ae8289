// SPDX-License-Identifier: Apache-2.0
#include "hs_stokes/fields.hpp"

#include <cmath>
#include <random>

namespace hs {

namespace {

int dim(const GridPtr& g) { return g->dimension; }

// Position of tangential point m and vertical node k as a d-vector.
std::array<double, 3> position(const HalfSpaceGrid& g, std::size_t m, std::size_t k) {
  const auto p = g.point(m);
  if (g.dimension == 2) return {p[0], g.vertical_nodes[k], 0.0};
  return {p[0], p[1], g.vertical_nodes[k]};
}

template <class F>
GridField fill(GridPtr g, int comps, F&& fn) {
  GridField out(g, comps);
  const std::size_t nv = g->n_vertical();
  parallel_for(g->n_points(), [&](std::size_t m) {
    std::array<double, 3> v{};
    for (std::size_t k = 0; k < nv; ++k) {
      const auto x = position(*g, m, k);
      fn(x, v);
      for (int c = 0; c < comps; ++c) out.at(c, m, k) = v[c];
    }
  });
  return out;
}

cd lambda_param(const FieldSpec& s) {
  const auto l = s.get_vec("lambda", {1.0, 0.0});
  require(!l.empty() && l.size() <= 2, "lambda parameter must be [re] or [re, im]");
  return {l[0], l.size() > 1 ? l[1] : 0.0};
}

std::vector<double> center_param(const FieldSpec& s, const HalfSpaceGrid& g) {
  std::vector<double> c = s.get_vec("center", {});
  if (c.empty()) {
    c.assign(g.dimension, g.box_length / 2);
    c.back() = 1.0;
  }
  require(static_cast<int>(c.size()) == g.dimension, "center must have d entries");
  return c;
}

// Periodic bump e^{kappa (cos(2 pi (x - c)/L) - 1)} and its derivative.
struct Periodic {
  double kappa, L;
  double value(double x, double c) const { return std::exp(kappa * (std::cos(2 * kPi * (x - c) / L) - 1)); }
  double deriv(double x, double c) const {
    return -kappa * (2 * kPi / L) * std::sin(2 * kPi * (x - c) / L) * value(x, c);
  }
};

GridField div_free_bump(GridPtr g, const FieldSpec& s) {
  const auto c = center_param(s, *g);
  const double w = s.get("width", 1.0), amp = s.get("amplitude", 1.0);
  const Periodic per{s.get("kappa", 2.0), g->box_length};
  require(w > 0, "width must be positive");
  const double cz = c.back();
  // vertical profile z^2 e^{-(z-cz)^2/w^2}, vanishing to second order on the wall
  auto h = [&](double z) { return z * z * std::exp(-(z - cz) * (z - cz) / (w * w)); };
  auto dh = [&](double z) {
    return (2 * z - 2 * z * z * (z - cz) / (w * w)) * std::exp(-(z - cz) * (z - cz) / (w * w));
  };
  if (g->dimension == 2) {
    return fill(g, 2, [&](const std::array<double, 3>& x, std::array<double, 3>& v) {
      v[0] = amp * per.value(x[0], c[0]) * dh(x[1]);
      v[1] = -amp * per.deriv(x[0], c[0]) * h(x[1]);
    });
  }
  const auto tilt = s.get_vec("tilt", {1.0, 0.5});
  require(tilt.size() == 2, "tilt must have two entries");
  return fill(g, 3, [&](const std::array<double, 3>& x, std::array<double, 3>& v) {
    const double g1 = per.value(x[0], c[0]), g2 = per.value(x[1], c[1]);
    const double d1 = per.deriv(x[0], c[0]) * g2, d2 = g1 * per.deriv(x[1], c[1]);
    const double gg = g1 * g2;
    v[0] = -amp * tilt[1] * gg * dh(x[2]);
    v[1] = amp * tilt[0] * gg * dh(x[2]);
    v[2] = amp * (tilt[1] * d1 - tilt[0] * d2) * h(x[2]);
  });
}

struct TrigTerm {
  int k1, k2;
  double a, b;
};

GridField random_solenoidal(GridPtr g, const FieldSpec& s) {
  const auto seed = static_cast<std::uint64_t>(s.get("seed", 1.0));
  const double ell = s.get("ell", 1.0), amp = s.get("amplitude", 1.0);
  const int K = static_cast<int>(s.get("modes", 2.0));
  require(ell > 0 && K >= 0, "random_solenoidal needs ell > 0 and modes >= 0");
  require(2 * K < g->n_tangential, "random_solenoidal modes exceed the grid resolution");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  const int d = g->dimension;
  const int npot = d == 2 ? 1 : 2;
  std::vector<std::vector<TrigTerm>> pot(npot);
  for (int p = 0; p < npot; ++p)
    for (int k1 = -K; k1 <= K; ++k1)
      for (int k2 = (d == 2 ? 0 : -K); k2 <= (d == 2 ? 0 : K); ++k2) {
        if (k1 < 0 || (k1 == 0 && k2 <= 0)) continue;  // no tangential mean flow
        pot[p].push_back({k1, k2, nd(rng), nd(rng)});
      }
  const double norm = amp / std::sqrt(static_cast<double>(pot[0].size()));
  const double q = 2 * kPi / g->box_length;
  // value and tangential derivatives of one potential
  auto eval = [&](const std::vector<TrigTerm>& terms, double x1, double x2, double& v, double& d1, double& d2) {
    v = d1 = d2 = 0;
    for (const auto& t : terms) {
      const double th = q * (t.k1 * x1 + t.k2 * x2);
      const double cs = std::cos(th), sn = std::sin(th);
      v += t.a * cs + t.b * sn;
      const double dd = -t.a * sn + t.b * cs;
      d1 += q * t.k1 * dd;
      d2 += q * t.k2 * dd;
    }
  };
  auto phi = [&](double z) { return z * z * std::exp(-z / ell); };
  auto dphi = [&](double z) { return (2 * z - z * z / ell) * std::exp(-z / ell); };
  if (d == 2) {
    return fill(g, 2, [&](const std::array<double, 3>& x, std::array<double, 3>& v) {
      double t, t1, t2;
      eval(pot[0], x[0], 0.0, t, t1, t2);
      v[0] = norm * t * dphi(x[1]);
      v[1] = -norm * t1 * phi(x[1]);
    });
  }
  return fill(g, 3, [&](const std::array<double, 3>& x, std::array<double, 3>& v) {
    double a, a1, a2, b, b1, b2;
    eval(pot[0], x[0], x[1], a, a1, a2);
    eval(pot[1], x[0], x[1], b, b1, b2);
    v[0] = -norm * b * dphi(x[2]);
    v[1] = norm * a * dphi(x[2]);
    v[2] = norm * (b1 - a2) * phi(x[2]);
  });
}

}  // namespace

std::vector<std::string> field_catalog() {
  return {"zero", "constant", "gaussian_bump", "div_free_bump", "manufactured", "parasitic", "random_solenoidal"};
}

ManufacturedPair manufactured_pair(GridPtr g, cd lambda, double ell, int mode) {
  require(ell > 0, "ell must be positive");
  require(mode != 0 && 2 * std::abs(mode) < g->n_tangential, "mode must be a resolved nonzero wave index");
  const int d = g->dimension;
  const double k = 2 * kPi * mode / g->box_length;
  ManufacturedPair mp{GridField(g, d), GridField(g, 1), GridField(g, d), GridField(g, d)};
  const std::size_t nv = g->n_vertical();
  for (std::size_t m = 0; m < g->n_points(); ++m) {
    const double x = g->point(m)[0];
    const double cs = std::cos(k * x), sn = std::sin(k * x);
    for (std::size_t j = 0; j < nv; ++j) {
      const double y = g->vertical_nodes[j];
      const double e = std::exp(-y / ell), ek = std::exp(-std::abs(k) * y);
      const double h = y * y * e;
      const double h1 = (2 * y - y * y / ell) * e;
      const double h2 = (2 - 4 * y / ell + y * y / (ell * ell)) * e;
      const double h3 = (-6 / ell + 6 * y / (ell * ell) - y * y / (ell * ell * ell)) * e;
      const double ak = std::abs(k);
      // the pair only depends on |k|; ps keeps the pressure sign consistent
      const double ps = k / ak;
      mp.u.at(0, m, j) = h1 * cs;
      mp.u.at(d - 1, m, j) = k * h * sn;
      mp.p.at(0, m, j) = -2 * ps * ek * sn;
      mp.grad_p.at(0, m, j) = -2 * ps * k * ek * cs;
      mp.grad_p.at(d - 1, m, j) = 2 * ps * ak * ek * sn;
      mp.f.at(0, m, j) = (lambda * h1 - h3 + k * k * h1) * cs + mp.grad_p.at(0, m, j);
      mp.f.at(d - 1, m, j) = k * (lambda * h - h2 + k * k * h) * sn + mp.grad_p.at(d - 1, m, j);
    }
  }
  return mp;
}

GridField sample_field(GridPtr g, const FieldSpec& s) {
  const int d = dim(g);
  const std::string& n = s.name;
  if (n == "zero") return GridField(g, static_cast<int>(s.get("components", d)));
  if (n == "constant") {
    const auto v = s.get_vec("value", {1.0});
    require(!v.empty() && v.size() <= 9, "constant value must have 1..9 entries");
    GridField out(g, static_cast<int>(v.size()));
    for (int c = 0; c < out.components; ++c)
      for (std::size_t m = 0; m < g->n_points(); ++m)
        for (std::size_t k = 0; k < g->n_vertical(); ++k) out.at(c, m, k) = v[c];
    return out;
  }
  if (n == "gaussian_bump") {
    const auto c = center_param(s, *g);
    const double w = s.get("width", 1.0), amp = s.get("amplitude", 1.0);
    const int comps = static_cast<int>(s.get("components", 1));
    require(w > 0 && comps >= 1 && comps <= 9, "gaussian_bump needs width > 0 and 1..9 components");
    const double L = g->box_length;
    GridField out(g, comps);
    for (std::size_t m = 0; m < g->n_points(); ++m)
      for (std::size_t k = 0; k < g->n_vertical(); ++k) {
        const auto x = position(*g, m, k);
        double r2 = 0;
        for (int a = 0; a < d; ++a) {
          double dx = x[a] - c[a];
          if (a < d - 1) dx -= L * std::round(dx / L);  // nearest periodic image
          r2 += dx * dx;
        }
        for (int cc = 0; cc < comps; ++cc) out.at(cc, m, k) = amp * std::exp(-r2 / (w * w));
      }
    return out;
  }
  if (n == "div_free_bump") return div_free_bump(g, s);
  if (n == "manufactured") {
    return manufactured_pair(g, lambda_param(s), s.get("ell", 0.5), static_cast<int>(s.get("mode", 1))).f;
  }
  if (n == "parasitic") {
    const auto D = s.get_vec("D", std::vector<double>(d - 1, 1.0));
    require(static_cast<int>(D.size()) == d - 1, "D must have d-1 entries");
    const cd l = lambda_param(s);
    const cd sl = std::sqrt(l);
    GridField out(g, d);
    for (std::size_t m = 0; m < g->n_points(); ++m)
      for (std::size_t k = 0; k < g->n_vertical(); ++k) {
        const double z = g->vertical_nodes[k];
        for (int a = 0; a < d - 1; ++a) out.at(a, m, k) = (D[a] / l) * (std::exp(-sl * z) - 1.0);
      }
    return out;
  }
  if (n == "random_solenoidal") return random_solenoidal(g, s);
  fail(ErrorCode::invalid_argument, "unknown field '" + n + "'");
}

}  // namespace hs
