// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <functional>
#include <vector>

#include "hs_stokes/core.hpp"

namespace hs {

// Up to four complex components integrated together.
using Vec4 = std::array<cd, 4>;
using VecFun = std::function<Vec4(double)>;

struct QuadResult {
  Vec4 value{};
  double error = 0;
  double l1 = 0;  // integral of max-component magnitude
  long evaluations = 0;
  bool converged = true;
};

// Adaptive Gauss-Kronrod 7/15 on [a, b].
// Stops when error <= max(abs_tol, rel_tol * |value|, l1_rel * int |f|).
QuadResult integrate_adaptive(const VecFun& f, double a, double b, double abs_tol, double rel_tol,
                              int max_intervals = 4000, double l1_rel = 0.0);

// int_0^inf f(rho) drho for integrands of the form (smooth) * e^{-sigma rho} * oscillation(r rho).
// Half-period panels of width pi/r; partial sums accelerated by Wynn's epsilon algorithm
// when the tail decays slowly.
QuadResult integrate_half_line(const VecFun& f, double r_osc, double sigma, double rel_tol);

// Gauss-Legendre nodes/weights on [-1, 1] for n in {4, 8, 16, 20, 32}.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

// Wynn epsilon extrapolation of a sequence (uses the trailing <= 40 terms).
cd wynn_epsilon(const std::vector<cd>& s, double* err = nullptr);

}  // namespace hs
