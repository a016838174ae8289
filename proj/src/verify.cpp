// SPDX-License-Identifier: Apache-2.0
#include "hs_stokes/verify.hpp"

#include <cmath>

#include "hs_stokes/quadrature.hpp"

namespace hs {

cd parasitic_profile(cd lambda, double D, double y) {
  return D / lambda * (std::exp(-std::sqrt(lambda) * y) - 1.0);
}

cd parasitic_profile_dd(cd lambda, double D, double y) { return D * std::exp(-std::sqrt(lambda) * y); }

ParasiticResidual parasitic_residual(const SectorPoint& lambda, std::array<double, 2> D, GridPtr g) {
  const cd l = lambda.value();
  const int d = g->dimension;
  ParasiticResidual r;
  // the profile depends on x_d only, so every tangential node repeats the same column
  for (std::size_t m = 0; m < g->n_points(); ++m)
    for (double y : g->vertical_nodes) {
      for (int j = 0; j < d - 1; ++j) {
        // tangential Laplacian and divergence vanish identically for a function of x_d
        const cd res = l * parasitic_profile(l, D[j], y) - parasitic_profile_dd(l, D[j], y) + D[j];
        r.momentum = std::max(r.momentum, std::abs(res));
        if (y == 0) r.boundary = std::max(r.boundary, std::abs(parasitic_profile(l, D[j], y)));
      }
    }
  return r;
}

std::array<double, 2> TimeProfile::value(double t) const {
  const double s = frequency == 0 ? 1.0 : std::sin(frequency * t + phase);
  return {amplitude[0] * s, amplitude[1] * s};
}

std::array<double, 2> TimeProfile::derivative(double t) const {
  const double s = frequency == 0 ? 0.0 : frequency * std::cos(frequency * t + phase);
  return {amplitude[0] * s, amplitude[1] * s};
}

namespace {

double integrate_real(const std::function<double(double)>& f, double a, double b) {
  if (b <= a) return 0.0;
  const QuadResult q = integrate_adaptive([&](double x) { return Vec4{f(x), 0.0, 0.0, 0.0}; }, a, b, 1e-15, 1e-13);
  return q.value[0].real();
}

}  // namespace

HeatProfileValue nonsteady_profile(const TimeProfile& D, int c, double t, double y) {
  require(t >= 0 && y >= 0, "profile needs t >= 0 and y >= 0");
  HeatProfileValue v;
  if (t == 0) return v;
  auto Dc = [&](double s) { return D.value(s)[c]; };
  auto dDc = [&](double s) { return D.derivative(s)[c]; };
  auto E = [&](double s) { return s <= 0 ? (y > 0 ? 1.0 : 0.0) : std::erf(y / (2 * std::sqrt(s))); };
  v.a = -integrate_real([&](double s) { return Dc(t - s) * E(s); }, 0, t);
  // d/dt of -int_0^t D(t - s) E(s) ds
  v.a_t = -Dc(0) * E(t) - integrate_real([&](double s) { return dDc(t - s) * E(s); }, 0, t);
  // d_yy E(s) = -y s^{-3/2} e^{-y^2/4s} / (2 sqrt pi); with r = y / (2 sqrt s) the integral becomes
  // (2 / sqrt pi) int_{r0}^inf D(t - y^2 / 4r^2) e^{-r^2} dr
  if (y == 0) {
    v.a_yy = Dc(t);
  } else {
    const double r0 = y / (2 * std::sqrt(t));
    v.a_yy = 2 / std::sqrt(kPi) *
             integrate_real([&](double r) { return Dc(t - y * y / (4 * r * r)) * std::exp(-r * r); }, r0, r0 + 9.0);
  }
  return v;
}

NonsteadyResidual nonsteady_parasitic_residual(const TimeProfile& D, GridPtr g, const std::vector<double>& times) {
  const int d = g->dimension;
  NonsteadyResidual r;
  for (int c = 0; c < d - 1; ++c) {
    for (double y : g->vertical_nodes) r.initial = std::max(r.initial, std::abs(nonsteady_profile(D, c, 0.0, y).a));
    for (double t : times) {
      require(t > 0, "residual times must be positive");
      r.boundary = std::max(r.boundary, std::abs(nonsteady_profile(D, c, t, 0.0).a));
      for (double y : g->vertical_nodes) {
        if (y == 0) continue;
        const HeatProfileValue v = nonsteady_profile(D, c, t, y);
        r.momentum = std::max(r.momentum, std::abs(v.a_t - v.a_yy + D.value(t)[c]));
      }
    }
  }
  return r;
}

LiouvilleCheck liouville_pressure_check(const ResolventSolution& sol, const std::vector<double>& radii,
                                        std::array<double, 2> injected) {
  require(radii.size() >= 2, "decay check needs at least two radii");
  LiouvilleCheck c;
  c.profile = pressure_decay_profile(sol.modes, radii, injected);
  c.slope = loglog_slope(c.profile);
  const double first = c.profile.front().second, last = c.profile.back().second;
  c.decay_ratio = first > 0 ? last / first : 0.0;
  bool decreasing = true;
  for (std::size_t i = 0; i + 1 < c.profile.size(); ++i)
    decreasing = decreasing && c.profile[i + 1].second < c.profile[i].second;
  const bool zero = first == 0 && last == 0;
  c.non_decaying = !zero && (c.slope > -0.5 || !decreasing);
  return c;
}

}  // namespace hs
