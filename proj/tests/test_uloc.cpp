// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <random>

#include "doctest.h"
#include "hs_stokes/fields.hpp"
#include "hs_stokes/uloc.hpp"

using namespace hs;

namespace {

GridField from_function(GridPtr g, int comps, const std::function<double(double, double, double, int)>& fn) {
  GridField f(g, comps);
  for (std::size_t m = 0; m < g->n_points(); ++m) {
    const auto p = g->point(m);
    for (std::size_t k = 0; k < g->n_vertical(); ++k)
      for (int c = 0; c < comps; ++c) f.at(c, m, k) = fn(p[0], p[1], g->vertical_nodes[k], c);
  }
  return f;
}

}  // namespace

TEST_CASE("uloc: closed-form examples") {
  auto g2 = make_grid(2, 8.0, 32, 4.0, 16, 1.0);
  auto g3 = make_grid(3, 4.0, 16, 3.0, 12, 1.0);
  for (auto g : {g2, g3}) {
    auto one = from_function(g, 1, [](double, double, double, int) { return 1.0; });
    CHECK(uloc_norm(one, {2.0, 1.0}) == doctest::Approx(1.0).epsilon(1e-14));
    auto cube = from_function(g, 1, [d = g->dimension](double x, double y, double z, int) {
      const bool in = x >= 1 && x <= 2 && z <= 1 && (d == 2 || (y >= 1 && y <= 2));
      return in ? 1.0 : 0.0;
    });
    CHECK(uloc_norm(cube, {1.0, 1.0}) == doctest::Approx(1.0).epsilon(1e-14));
  }
  auto decay = from_function(make_grid(2, 8.0, 16, 20.0, 200, 1.0), 1,
                             [](double, double, double z, int) { return std::exp(-z); });
  CHECK(uloc_norm(decay, {kInfExponent, 1.0}) == 1.0);
}

TEST_CASE("uloc: rejects non-tiling cubes and bad exponents") {
  auto g = make_grid(2, 2 * kPi, 16, 4.0, 8, 1.0);
  GridField f(g, 1);
  CHECK_THROWS_WITH(uloc_norm(f, {2.0, 1.0}), doctest::Contains("tile"));
  CHECK_NOTHROW(uloc_norm(f, {2.0, kPi / 2}));
  CHECK_THROWS(uloc_norm(f, {0.5, kPi / 2}));
}

TEST_CASE("uloc: matches a direct trapezoid recomputation") {
  auto g = make_grid(2, 4.0, 16, 3.0, 12, 1.0);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  GridField f(g, 2);
  for (auto& v : f.values) v = cd(nd(rng), nd(rng));
  for (double q : {1.0, 2.0, 3.5}) {
    double best = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 3; ++j) {
        double acc = 0;
        for (int a = 0; a <= 4; ++a)
          for (int b = 0; b <= 4; ++b) {
            const std::size_t m = (4 * i + a) % 16, k = 4 * j + b;
            const double wa = (a == 0 || a == 4) ? 0.5 : 1.0, wb = (b == 0 || b == 4) ? 0.5 : 1.0;
            const double mag = std::sqrt(std::norm(f.at(0, m, k)) + std::norm(f.at(1, m, k)));
            acc += wa * wb * 0.0625 * std::pow(mag, q);
          }
        best = std::max(best, std::pow(acc, 1 / q));
      }
    CHECK(uloc_norm(f, {q, 1.0}) == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("uloc: monotone under pointwise domination") {
  auto g = make_grid(3, 4.0, 8, 3.0, 9, 1.1);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1, 1), s(0, 1);
  for (int trial = 0; trial < 5; ++trial) {
    GridField f(g, 3), h(g, 3);
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      f.values[i] = cd(u(rng), u(rng));
      h.values[i] = s(rng) * f.values[i];
    }
    for (double q : {1.0, 2.0, kInfExponent}) CHECK(uloc_norm(h, {q, 2.0}) <= uloc_norm(f, {q, 2.0}));
  }
}

TEST_CASE("uloc: dilation scaling on nested grids") {
  auto ga = make_grid(2, 4.0, 16, 4.0, 16, 1.0);
  auto gb = make_grid(2, 8.0, 16, 8.0, 16, 1.0);
  auto fn = [](double x, double, double z, int) { return std::sin(kPi * x / 2) * z * std::exp(-z); };
  auto fa = from_function(ga, 1, fn);
  auto fb = from_function(gb, 1, [&](double x, double y, double z, int c) { return fn(x / 2, y, z / 2, c); });
  for (double q : {1.0, 2.0, 4.0})
    CHECK(uloc_norm(fb, {q, 2.0}) == doctest::Approx(std::pow(2.0, 2 / q) * uloc_norm(fa, {q, 1.0})).epsilon(1e-12));
}

TEST_CASE("uloc: invariant under lattice translations of a bump") {
  auto g = make_grid(3, 8.0, 32, 8.0, 32, 1.0);
  FieldSpec a, b;
  a.name = b.name = "gaussian_bump";
  a.params = {{"center", {2.5, 3.5, 3.5}}, {"width", {0.4}}};
  b.params = {{"center", {5.5, 1.5, 4.5}}, {"width", {0.4}}};
  const auto fa = sample_field(g, a), fb = sample_field(g, b);
  for (double q : {1.0, 2.0}) CHECK(uloc_norm(fa, {q, 1.0}) == doctest::Approx(uloc_norm(fb, {q, 1.0})).epsilon(1e-12));
}

TEST_CASE("kato norm: zero and constant snapshots") {
  auto g = make_grid(2, 4.0, 16, 3.0, 12, 1.0);
  CHECK(kato_norm({{0.5, GridField(g, 2)}, {1.0, GridField(g, 2)}}, 2.0) == 0.0);
  auto c = from_function(g, 1, [](double, double, double, int) { return 3.0; });
  CHECK(kato_norm({{1.0, c}}, 2.0) == doctest::Approx(6.0).epsilon(1e-13));
  CHECK_THROWS(kato_norm({}, 2.0));
  CHECK_THROWS(kato_norm({{1.0, c}, {0.5, c}}, 2.0));
}
