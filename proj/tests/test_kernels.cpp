#include <chrono>
#include <cmath>
#include <random>

#include "doctest.h"
#include "hs_stokes/kernels.hpp"

using namespace hs;

namespace {
KernelQuery make(KernelId id, int d, SectorPoint l, std::array<double, 2> yp, double y, double z) {
  KernelQuery q;
  q.id = id;
  q.dimension = d;
  q.lambda = l;
  q.y_prime = yp;
  q.y_d = y;
  q.z_d = z;
  return q;
}
}  // namespace

TEST_CASE("kernels: d=3 k1 matches the Yukawa form") {
  const auto q = make(KernelId::k1, 3, SectorPoint(1, 0, kPi / 8), {1, 0}, 0, 0);
  auto v = eval_kernel(q);
  CHECK(std::abs(v.value[0] - std::exp(-1.0) / (4 * kPi)) < 1e-10);
  CHECK(std::abs(v.value[0] - 2.92750e-2) < 1e-6);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int i = 0; i < 5; ++i) {
    auto qi = make(KernelId::k1, 3, SectorPoint(1, 0, kPi / 8), {u(rng), u(rng)}, u(rng), 0);
    const double r = std::sqrt(qi.y_prime[0] * qi.y_prime[0] + qi.y_prime[1] * qi.y_prime[1] + qi.y_d * qi.y_d);
    const double ref = std::exp(-r) / (4 * kPi * r);
    CHECK(std::abs(eval_kernel(qi).value[0] - ref) < 1e-8 * ref);
  }
}

TEST_CASE("kernels: d=2 k1 matches K0/(2 pi)") {
  auto v = eval_kernel(make(KernelId::k1, 2, SectorPoint(1, 0, kPi / 8), {0, 0}, 1, 0));
  const double ref = std::cyl_bessel_k(0.0, 1.0) / (2 * kPi);
  CHECK(std::abs(v.value[0] - ref) < 1e-10 * ref);
  CHECK(std::abs(v.value[0] - 6.7006e-2) < 1e-5);
  auto w = eval_kernel(make(KernelId::k1, 2, SectorPoint(1, 0, kPi / 8), {1.3, 0}, 0, 0));
  const double ref2 = std::cyl_bessel_k(0.0, 1.3) / (2 * kPi);
  CHECK(std::abs(w.value[0] - ref2) < 1e-8 * ref2);
}

TEST_CASE("kernels: parity zeros at y' = 0 for real lambda") {
  for (int d : {2, 3}) {
    auto q = eval_kernel(make(KernelId::q, d, SectorPoint(1, 0, kPi / 8), {0, 0}, 0.5, 0.7));
    for (auto c : q.value) CHECK(std::abs(c) < 1e-14);
    auto rd = eval_kernel(make(KernelId::r_d, d, SectorPoint(1, 0, kPi / 8), {0, 0}, 0.5, 0.7));
    for (auto c : rd.value) CHECK(std::abs(c) < 1e-14);
  }
  auto rp = eval_kernel(make(KernelId::r_prime, 3, SectorPoint(1, 0, kPi / 8), {0, 0}, 0.5, 0.7));
  CHECK(std::abs(rp.value[1]) < 1e-14);
  CHECK(std::abs(rp.value[2]) < 1e-14);
  CHECK(std::abs(rp.value[0]) > 1e-6);
}

TEST_CASE("kernels: conjugation symmetry") {
  for (KernelId id : {KernelId::k1, KernelId::k2, KernelId::r_prime, KernelId::r_d, KernelId::q}) {
    auto a = make(id, 3, SectorPoint(2, 1.0, kPi / 8), {0.3, -0.4}, 0.6, 0.2);
    auto b = a;
    b.lambda = SectorPoint(2, -1.0, kPi / 8);
    auto va = eval_kernel(a), vb = eval_kernel(b);
    for (std::size_t i = 0; i < va.value.size(); ++i)
      CHECK(std::abs(vb.value[i] - std::conj(va.value[i])) < 1e-9 * std::max(1e-12, std::abs(va.value[i])));
  }
}

TEST_CASE("kernels: scaling identity") {
  for (KernelId id : {KernelId::k1, KernelId::k2, KernelId::r_prime, KernelId::r_d, KernelId::q}) {
    for (int d : {2, 3}) {
      auto q = make(id, d, SectorPoint(4, 0, kPi / 8), {0.7, 0.2}, 0.4, 0.3);
      if (d == 2) q.y_prime[1] = 0;
      auto s = scaling_gap(q);
      CHECK(s.converged);
      CHECK(s.gap < 1e-8);
    }
  }
}

TEST_CASE("kernels: envelope examples") {
  KernelDeriv none;
  const double c = 0.4;
  CHECK(bound_envelope(KernelId::k1, none, 3, 1.0, {2, 0}, 0, 0, c) == doctest::Approx(1.0 / 18));
  CHECK(bound_envelope(KernelId::r_prime, none, 3, 1.0, {1, 0}, 0, 0.5, c) == 0.0);
  CHECK(bound_envelope(KernelId::q, none, 3, 1.0, {0.5, 0}, 0.5, 0, c) == doctest::Approx(1.0));
  KernelDeriv bad;
  bad.zd = 2;
  CHECK_THROWS(bound_envelope(KernelId::r_d, bad, 3, 1.0, {1, 0}, 1, 1, c));
  CHECK_THROWS(eval_kernel(make(KernelId::k2, 3, SectorPoint(1, 0, kPi / 8), {0, 0}, 0, 0)));
}

TEST_CASE("kernels: bound ratio sweep is finite (small sample)") {
  SamplePlan plan;
  plan.dimension = 2;
  plan.n_samples = 64;
  auto t0 = std::chrono::steady_clock::now();
  auto rep = check_bound_ratio(KernelId::k1, 0, 0, 0, plan);
  auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  MESSAGE("k1 d=2 ratio sweep: C=" << rep.fitted_constant << " stab=" << rep.stability_ratio << " t=" << dt);
  CHECK(std::isfinite(rep.fitted_constant));
  CHECK(rep.fitted_constant > 0);
}
