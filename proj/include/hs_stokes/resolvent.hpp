// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>
#include <vector>

#include "hs_stokes/core.hpp"
#include "hs_stokes/report.hpp"

namespace hs {

// Per-mode solution data of the Stokes resolvent. Linear in the data, so
// solutions at different lambda can be combined mode by mode.
struct StokesModes {
  GridPtr grid;
  SpectralField u;    // d components
  SpectralField uy;   // vertical derivative
  SpectralField uyy;  // second vertical derivative
  std::vector<cd> p_coef;  // p^(xi, y) = p_coef * e^{-|xi| y}; 0 at xi = 0

  StokesModes() = default;
  explicit StokesModes(GridPtr g);
  void axpy(cd a, const StokesModes& o);  // this += a * o
  void scale(cd a);
};

// Exact per-mode solve for spectral data (no admissibility checks).
StokesModes solve_modes(cd lambda, const SpectralField& f);

GridField modes_velocity(const StokesModes& m);
GridField modes_velocity_gradient(const StokesModes& m);  // component c*d + j
GridField modes_velocity_hessian(const StokesModes& m);   // component (c*d + i)*d + j
GridField modes_pressure(const StokesModes& m);
GridField modes_pressure_gradient(const StokesModes& m);
// max |div u| at the nodes, analytic vertical derivatives
double modes_divergence(const StokesModes& m);
// max |u| on the boundary
double modes_boundary(const StokesModes& m);

struct ResolventDiagnostics {
  double tail_bound = 0;        // e^{-Re omega(0) H}
  double pde_residual = 0;      // max |lambda u - Lap u + grad p - f| / max |f| (interior)
  double div_residual = 0;      // max |div u| / max |f|
  double bc_residual = 0;       // max |u(x', 0)| / max |f|
  double input_divergence = 0;  // max |div f| / max |grad f|
  double input_boundary = 0;    // max |f_d(x', 0)| / max |f|
  std::vector<std::pair<double, double>> pressure_decay_profile;
};

struct ResolventOptions {
  bool check_input = true;
  double div_tol = 1e-3;  // relative divergence allowed in the data
  double bc_tol = 1e-10;  // relative normal trace allowed in the data
  bool diagnostics = true;
  std::vector<double> decay_radii;  // R values for the pressure decay profile
};

struct ResolventSolution {
  GridField u;
  GridField grad_p;
  GridField p;
  ResolventDiagnostics diagnostics;
  StokesModes modes;
};

ResolventSolution solve_resolvent(const SectorPoint& lambda, const GridField& f,
                                  const ResolventOptions& opt = {});
// Velocity of the Dirichlet-Laplace part, componentwise on any field.
GridField dirichlet_laplace_part(const SectorPoint& lambda, const GridField& f);
GridField dirichlet_laplace_part(cd lambda, const GridField& f);

enum class ConvolveMode { whole, reflected, nonlocal_y, pressure };
// int_0^H multiplier(y_k, z) profile(z) dz at every node y_k, exact for the
// piecewise-cubic profile.
std::vector<cd> vertical_convolve(const VerticalBasis& b, cd lambda, const std::vector<cd>& profile,
                                  ConvolveMode mode, double xi_norm);

// R -> || grad' p + D ||_{L^1(|x'|<1, R<x_d<R+1)}, D an added constant tangential gradient.
std::vector<std::pair<double, double>> pressure_decay_profile(const StokesModes& m, const std::vector<double>& radii,
                                                              std::array<double, 2> injected = {0.0, 0.0});
// Same profile for an explicit tangential pressure gradient D (parasitic pressure D.x').
std::vector<std::pair<double, double>> constant_gradient_profile(std::array<double, 2> D, int dimension,
                                                                 const std::vector<double>& radii);
// Least-squares slope of log(value) against log(R), skipping zeros.
double loglog_slope(const std::vector<std::pair<double, double>>& profile);

// Relative divergence and normal trace of a d-vector field.
double relative_divergence(const GridField& f);
double relative_normal_trace(const GridField& f);

}  // namespace hs
