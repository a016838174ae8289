// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <utility>
#include <vector>

#include "hs_stokes/core.hpp"
#include "hs_stokes/resolvent.hpp"

namespace hs {

// Steady parasitic pair u = (a'(x_d), 0), p = D.x' with a_j = (D_j / lambda)(e^{-sqrt(lambda) x_d} - 1).
// The pressure is linear in x' and is never sampled onto the periodic box.
struct ParasiticResidual {
  double momentum = 0;    // max |lambda u - Lap u + grad p| over the grid nodes
  double divergence = 0;  // max |div u|
  double boundary = 0;    // max |u(x', 0)|
  double max() const { return std::max({momentum, divergence, boundary}); }
};
ParasiticResidual parasitic_residual(const SectorPoint& lambda, std::array<double, 2> D, GridPtr g);
// Closed-form profile a_j and its second derivative at height y.
cd parasitic_profile(cd lambda, double D, double y);
cd parasitic_profile_dd(cd lambda, double D, double y);

// Tangential pressure gradient D(t) = amplitude * (frequency == 0 ? 1 : sin(frequency t + phase)).
struct TimeProfile {
  std::array<double, 2> amplitude{1.0, 0.0};
  double frequency = 0;
  double phase = 0;
  std::array<double, 2> value(double t) const;
  std::array<double, 2> derivative(double t) const;
};

// Unsteady parasitic pair u = (a'(t, x_d), 0), p = D(t).x' with a solving
// d_t a - d_yy a = -D(t), a(t, 0) = 0, a(0, .) = 0, from the half-line representation
// a(t, y) = -int_0^t D(t - s) erf(y / (2 sqrt s)) ds. The residual d_t a - d_yy a + D is
// evaluated from two separate quadratures (through D' and through the heat kernel).
struct NonsteadyResidual {
  double momentum = 0;  // max over interior nodes and times
  double boundary = 0;  // max |a(t, 0)|
  double initial = 0;   // max |a(0, y)|
  double max() const { return std::max({momentum, boundary, initial}); }
};
NonsteadyResidual nonsteady_parasitic_residual(const TimeProfile& D, GridPtr g, const std::vector<double>& times);
// a(t, y), d_t a and d_yy a for one tangential component.
struct HeatProfileValue {
  double a = 0, a_t = 0, a_yy = 0;
};
HeatProfileValue nonsteady_profile(const TimeProfile& D, int component, double t, double y);

// Pressure decay diagnostic R -> || grad' p + D ||_{L^1(|x'| < 1, R < x_d < R + 1)} with an optional
// injected parasitic gradient D.
struct LiouvilleCheck {
  std::vector<std::pair<double, double>> profile;
  double slope = 0;            // least-squares slope of log profile against log R
  double decay_ratio = 0;      // last / first profile value
  bool non_decaying = false;   // slope > -0.5 or the profile fails to decrease
};
LiouvilleCheck liouville_pressure_check(const ResolventSolution& sol, const std::vector<double>& radii,
                                        std::array<double, 2> injected = {0.0, 0.0});

}  // namespace hs
