// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <vector>

#include "hs_stokes/config.hpp"
#include "hs_stokes/core.hpp"
#include "hs_stokes/resolvent.hpp"

namespace hs {

// Upper half of the contour {|arg| = eta, |lambda| >= kappa} u {|lambda| = kappa, |arg| <= eta},
// arc first, then the ray out to the truncation radius. Gauss-Legendre panels: two on
// the arc, geometric (ratio 2) on the ray.
struct ContourNode {
  cd lambda;
  cd dl;      // dlambda / pi (path weight, no exponential)
  cd weight;  // e^{t lambda} dl
};

struct ContourQuadrature {
  double t = 1;
  double eta = 3 * kPi / 4;
  double kappa = 0.5;  // effective arc radius, min(requested, 1/t)
  double truncation_radius = 0;
  int n_nodes = 16;
  double tol = 1e-10;
  std::vector<ContourNode> nodes;
  double scalar_error = 0;  // |quadrature of (lambda+1)^{-1} - e^{-t}|
  bool meets_tol = true;

  // (2 pi i)^{-1} int e^{t lambda} g(lambda) dlambda for g with g(conj l) = conj g(l).
  double apply_scalar(const std::function<cd(cd)>& g) const;
};

// kappa is capped at 1/t so that e^{t kappa} stays O(1) on the arc.
ContourQuadrature build_contour(double t, double eta, double kappa, int n_nodes, double tol);
ContourQuadrature build_contour(double t, const ContourSpec& spec, double tol);

// Contour for integrands e^{tau lambda} g(lambda) with tau in [tau_min, tau_max]: arc radius
// capped by 1/tau_max, ray long enough for tau_min.
ContourQuadrature build_contour_window(double tau_min, double tau_max, const ContourSpec& spec, double tol);

struct SemigroupRequest {
  bool gradient = false;
  bool hessian = false;
  bool time_derivative = false;
  bool check_input = true;
};

struct SemigroupOutput {
  GridField u;
  GridField grad_u;  // c*d + j
  GridField hess_u;  // (c*d + i)*d + j
  GridField du_dt;
};

// e^{-tA} f by the Dunford integral over resolvent solves at the contour nodes.
SemigroupOutput apply_semigroup(const GridField& f, const ContourQuadrature& contour,
                                const SemigroupRequest& req = {});
GridField apply_semigroup(double t, const GridField& f, const ContourQuadrature& contour);
// e^{-tA} f at several times from one set of resolvent solves on the window contour.
std::vector<SemigroupOutput> apply_semigroup_times(const GridField& f, const std::vector<double>& times,
                                                   const ContourSpec& spec, double tol,
                                                   const SemigroupRequest& req = {});

// Sum_j w_j R(lambda_j) f mode by mode.
StokesModes weighted_resolvent_sum(const SpectralField& f, const std::vector<cd>& lambdas,
                                   const std::vector<cd>& weights);
GridField imag_part(const GridField& f);

// Dirichlet heat flow by odd reflection: tangential e^{-t|xi|^2}, vertical Gaussian
// difference integrated cell by cell against the nodal interpolant.
GridField heat_reflection_oracle(double t, const GridField& f);
// Same flow through the contour applied to the Dirichlet-Laplace resolvent.
GridField dirichlet_heat_by_contour(const GridField& f, const ContourQuadrature& contour);

}  // namespace hs
