#include <cmath>
#include <random>

#include "doctest.h"
#include "hs_stokes/core.hpp"
#include "hs_stokes/quadrature.hpp"
#include "hs_stokes/symbols.hpp"
#include "hs_stokes/vertical.hpp"

using namespace hs;

TEST_CASE("grid: uniform nodes and wavenumbers") {
  auto g = make_grid(2, 2 * kPi, 8, 1.0, 2, 1.0);
  REQUIRE(g->n_vertical() == 3);
  CHECK(g->vertical_nodes[1] == doctest::Approx(0.5));
  CHECK(g->vertical_nodes[2] == 1.0);
  std::vector<int> ks;
  for (int j = 0; j < 8; ++j) ks.push_back(g->wave_index(j));
  std::sort(ks.begin(), ks.end());
  for (int j = 0; j < 8; ++j) CHECK(ks[j] == j - 4);
  CHECK(g->wavenumber(1) == doctest::Approx(1.0));
}

TEST_CASE("grid: geometric placement matches recomputation") {
  auto g = make_grid(3, 10.0, 16, 5.0, 10, 1.2);
  REQUIRE(g->n_vertical() == 11);
  CHECK(g->n_points() == 256);
  double h = 5.0 * (1.2 - 1) / (std::pow(1.2, 10) - 1), z = 0;
  for (int i = 0; i < 10; ++i) {
    CHECK(g->vertical_nodes[i] == doctest::Approx(z).epsilon(1e-13));
    z += h;
    h *= 1.2;
  }
}

TEST_CASE("grid: rejects bad input") {
  CHECK_THROWS_WITH(make_grid(2, 2 * kPi, 7, 1.0, 2, 1.0), doctest::Contains("n_tangential must be even"));
  CHECK_THROWS(make_grid(2, 2 * kPi, 8, -1.0, 2, 1.0));
  CHECK_THROWS(make_grid(4, 2 * kPi, 8, 1.0, 2, 1.0));
}

TEST_CASE("grid: uniform grading is equispaced") {
  auto g = make_grid(2, 1.0, 4, 3.0, 30, 1.0);
  double dev = 0;
  for (std::size_t k = 0; k < g->n_vertical(); ++k) dev = std::max(dev, std::abs(g->vertical_nodes[k] - 0.1 * k));
  CHECK(dev < 1e-14 * 3.0);
}

TEST_CASE("spectral: DC mode, cosine pair, round trip, conjugate symmetry") {
  auto g = make_grid(3, 2 * kPi, 8, 1.0, 3, 1.0);
  GridField one(g, 1);
  for (auto& v : one.values) v = 1.0;
  auto s = to_spectral(one);
  for (std::size_t m = 0; m < g->n_points(); ++m)
    for (std::size_t k = 0; k < g->n_vertical(); ++k)
      CHECK(std::abs(s.at(0, m, k) - (m == 0 ? cd(1) : cd(0))) < 1e-14);

  GridField c(g, 1);
  for (std::size_t m = 0; m < g->n_points(); ++m)
    for (std::size_t k = 0; k < g->n_vertical(); ++k) c.at(0, m, k) = std::cos(g->point(m)[0]);
  auto sc = to_spectral(c);
  int nonzero = 0;
  for (std::size_t m = 0; m < g->n_points(); ++m) {
    if (std::abs(sc.at(0, m, 0)) > 1e-12) {
      ++nonzero;
      CHECK(std::abs(g->wave_index(g->split(m)[0])) == 1);
      CHECK(g->wave_index(g->split(m)[1]) == 0);
      CHECK(std::abs(sc.at(0, m, 0)) == doctest::Approx(0.5));
    }
  }
  CHECK(nonzero == 2);

  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  GridField r(g, 2);
  for (auto& v : r.values) v = nd(rng);
  auto sr = to_spectral(r);
  CHECK(relative_gap(to_physical(sr), r) < 1e-12);
  // conjugate symmetry: mode -k equals conj of mode k
  double asym = 0;
  const int n = g->n_tangential;
  for (std::size_t m = 0; m < g->n_points(); ++m) {
    auto jk = g->split(m);
    std::size_t mm = static_cast<std::size_t>(((n - jk[0]) % n) * n + (n - jk[1]) % n);
    for (std::size_t k = 0; k < g->n_vertical(); ++k)
      asym = std::max(asym, std::abs(sr.at(1, mm, k) - std::conj(sr.at(1, m, k))));
  }
  CHECK(asym < 1e-13);

  GridField bad(g, 1);
  bad.values[3] = std::nan("");
  CHECK_THROWS(to_spectral(bad));
}

TEST_CASE("sector point validation") {
  CHECK_NOTHROW(SectorPoint(1.0, 3 * kPi / 4, kPi / 8));
  CHECK_THROWS(SectorPoint(1.0, 0.95 * kPi, kPi / 8));
  CHECK_THROWS(SectorPoint(0.0, 0.0, kPi / 8));
}

TEST_CASE("symbols: omega examples and branch") {
  CHECK(std::abs(omega(cd(1), 0.0) - 1.0) < 1e-15);
  CHECK(std::abs(omega(cd(4), std::sqrt(5.0)) - 3.0) < 1e-15);
  CHECK(std::abs(omega(cd(0, 1), 0.0) - cd(std::sqrt(0.5), std::sqrt(0.5))) < 1e-15);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  double worst_conj = 0, worst_guard = 0, min_ratio = 1e9, min_ratio_half = 1e9;
  const double eps = kPi / 8;
  for (int i = 0; i < 20000; ++i) {
    const double mod = std::pow(10.0, -3 + 6 * u(rng)), arg = (2 * u(rng) - 1) * (kPi - eps);
    const double k = std::pow(10.0, -3 + 9 * u(rng));
    const cd l = std::polar(mod, arg);
    const cd w = omega(l, k);
    CHECK(w.real() > 0);
    worst_conj = std::max(worst_conj, std::abs(omega(std::conj(l), k) - std::conj(w)) / std::abs(w));
    const double ratio = w.real() / (std::sqrt(mod) + k);
    min_ratio = std::min(min_ratio, ratio);
    if (i < 10000) min_ratio_half = std::min(min_ratio_half, ratio);
    if (k <= 1e6) {
      const cd exact = (w + k) / l;
      // long double reference for 1/(w-k)
      const std::complex<long double> lw(w.real(), w.imag());
      const std::complex<long double> ref = (lw + (long double)k) / std::complex<long double>(l.real(), l.imag());
      worst_guard = std::max(worst_guard, (double)std::abs(std::complex<long double>(exact.real(), exact.imag()) - ref) / std::abs(exact));
    }
  }
  CHECK(worst_conj < 1e-15);
  CHECK(worst_guard < 1e-12);
  CHECK(min_ratio > 0);
  CHECK(min_ratio_half / min_ratio < 1.1);
}

TEST_CASE("symbols: multiplier examples") {
  auto m0 = resolvent_multipliers(SectorPoint(1, 0, kPi / 8), {0, 0}, 0, 0);
  CHECK(std::abs(m0.dl_whole - 0.5) < 1e-15);
  CHECK(std::abs(m0.dl_reflected - 0.5) < 1e-15);
  CHECK_FALSE(m0.pressure_scalar.has_value());
  auto m1 = resolvent_multipliers(SectorPoint(1, 0, kPi / 8), {1, 0}, 1, 0);
  const double s2 = std::sqrt(2.0);
  const double oracle = (std::exp(-1.0) - std::exp(-s2)) / (s2 * (s2 - 1));
  CHECK(std::abs(m1.nl_scalar - oracle) < 1e-14 * oracle);
  REQUIRE(m1.pressure_scalar.has_value());
  CHECK(std::abs(*m1.pressure_scalar - std::exp(-1.0) * (1 + 1 / s2)) < 1e-14);
}

TEST_CASE("cutoff bridge is monotone") {
  CHECK(cutoff_chi(1.5) == 1.0);
  CHECK(cutoff_chi(3.5) == 0.0);
  double prev = 1.0;
  for (int i = 0; i <= 1000; ++i) {
    const double v = cutoff_chi(2.0 + i / 1000.0);
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("vertical: exponential moments match quadrature") {
  for (cd x : {cd(1e-8), cd(0.3, 0.2), cd(1.9), cd(2.5, -1), cd(40, 30), cd(0, 25)}) {
    auto mk = exp_moments(x);
    for (int k = 0; k < 4; ++k) {
      auto q = integrate_adaptive([&](double t) { return Vec4{std::exp(-x * t) * std::pow(t, k), 0, 0, 0}; }, 0, 1, 0, 1e-14);
      CHECK(std::abs(mk[k] - q.value[0]) < 1e-13 * std::max(1.0, std::abs(q.value[0])));
    }
  }
}

TEST_CASE("vertical: cubic interpolation is exact on cubics") {
  auto g = make_grid(2, 1.0, 4, 2.0, 9, 1.15);
  const auto& b = *g->basis;
  std::vector<cd> phi(g->n_vertical()), d(g->n_vertical());
  auto p = [](double z) { return 1 - 2 * z + 0.5 * z * z * z; };
  for (std::size_t k = 0; k < phi.size(); ++k) phi[k] = p(g->vertical_nodes[k]);
  b.derivative(phi.data(), d.data());
  for (std::size_t k = 0; k < phi.size(); ++k) {
    const double z = g->vertical_nodes[k];
    CHECK(std::abs(d[k] - (-2 + 1.5 * z * z)) < 1e-12);
  }
  CHECK(std::abs(b.evaluate(phi.data(), 0.77) - p(0.77)) < 1e-13);
}

TEST_CASE("vertical: exponential sweep oracles") {
  // int_0^H e^{-|y-z|}/2 dz = 1 - e^{-y}/2 - e^{-(H-y)}/2
  auto g = make_grid(2, 1.0, 4, 40.0, 400, 1.0);
  const auto& b = *g->basis;
  auto w = exp_cell_weights(b, cd(1));
  std::vector<cd> one(g->n_vertical(), 1.0);
  auto s = exp_sweep(b, w, one.data());
  for (std::size_t k = 0; k < g->n_vertical(); k += 37) {
    const double y = g->vertical_nodes[k];
    CHECK(std::abs(0.5 * (s.A[k] + s.B[k]) - (1 - 0.5 * std::exp(-y) - 0.5 * std::exp(-(40.0 - y)))) < 1e-12);
  }
  // cubic profile on a graded grid vs adaptive quadrature, complex rate
  auto g2 = make_grid(2, 1.0, 4, 3.0, 7, 1.3);
  const auto& b2 = *g2->basis;
  const cd r(2.0, 5.0);
  auto w2 = exp_cell_weights(b2, r);
  std::vector<cd> phi(g2->n_vertical());
  auto p = [](double z) { return cd(0.3 - z + z * z * z / 4, z * z); };
  for (std::size_t k = 0; k < phi.size(); ++k) phi[k] = p(g2->vertical_nodes[k]);
  auto s2 = exp_sweep(b2, w2, phi.data());
  const double H = g2->height();
  for (std::size_t k = 0; k < g2->n_vertical(); ++k) {
    const double y = g2->vertical_nodes[k];
    auto qa = integrate_adaptive([&](double z) { return Vec4{std::exp(-r * (y - z)) * p(z), 0, 0, 0}; }, 0, y, 0, 1e-14);
    auto qb = integrate_adaptive([&](double z) { return Vec4{std::exp(-r * (z - y)) * p(z), 0, 0, 0}; }, y, H, 0, 1e-14);
    CHECK(std::abs(s2.A[k] - qa.value[0]) < 1e-12);
    CHECK(std::abs(s2.B[k] - qb.value[0]) < 1e-12);
  }
  CHECK(std::abs(s2.C - s2.B[0]) == 0.0);
}

TEST_CASE("quadrature: half-line oscillatory integrals") {
  // int_0^inf cos(r x) e^{-s x} dx = s/(s^2+r^2)
  for (double s : {1.0, 1e-3}) {
    const double r = 3.0;
    auto q = integrate_half_line([&](double x) { return Vec4{std::cos(r * x) * std::exp(-s * x), 0, 0, 0}; }, r, s, 1e-11);
    CHECK(q.converged);
    CHECK(std::abs(q.value[0] - s / (s * s + r * r)) < 1e-10 * std::abs(s / (s * s + r * r)) + 1e-13);
  }
  // int_0^inf J0(x) dx = 1 (slowly decaying, no exponential)
  auto q = integrate_half_line([](double x) { return Vec4{std::cyl_bessel_j(0.0, x), 0, 0, 0}; }, 1.0, 0.0, 1e-10);
  CHECK(q.converged);
  CHECK(std::abs(q.value[0] - 1.0) < 1e-9);
}

TEST_CASE("threads: parallel_for covers every index once") {
  set_thread_count(3);
  std::vector<int> hit(1000, 0);
  parallel_for(hit.size(), [&](std::size_t i) { hit[i] += 1; });
  for (int h : hit) CHECK(h == 1);
  set_thread_count(0);
}
