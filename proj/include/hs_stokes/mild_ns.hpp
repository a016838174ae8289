// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hs_stokes/config.hpp"
#include "hs_stokes/core.hpp"
#include "hs_stokes/semigroup.hpp"
#include "hs_stokes/uloc.hpp"

namespace hs {

// e^{-tA} P div (u (x) v). Throws when u (x) v violates the wall conditions.
GridField bilinear_term(const GridField& u, const GridField& v, const ContourQuadrature& contour);
GridField bilinear_term(double t, const GridField& u, const GridField& v, const ContourQuadrature& contour);

struct PicardOptions {
  double horizon = 0.5;
  int time_steps = 8;       // graded mesh t_j = T (j/n)^2
  double q = 2.0;           // exponent of the Kato norm
  double rho = 1.0;         // cube side of the uloc norms
  double tol = 1e-8;        // stop when the iterate gap in the Kato norm is below tol * ||u||_T
  int max_sweeps = 30;
  ContourSpec contour;
  double quadrature_tol = 1e-10;
};

enum class PicardVerdict { converged, diverged, not_converged };
const char* picard_verdict_name(PicardVerdict v);

struct Trajectory {
  std::vector<double> times;          // t_1 < ... < t_n = T
  std::vector<GridField> states;      // u(t_j)
  std::vector<double> contraction_history;  // Kato-norm gap of successive iterates, per sweep
  double q = 2.0;
  double rho = 1.0;
  double linear_kato_norm = 0;        // ||e^{-tA} u0||_T on the same mesh
  double initial_norm = 0;            // ||u0||_{L^q_uloc}
  PicardVerdict verdict = PicardVerdict::not_converged;
  double max_divergence = 0;          // max over states of max |div u| / max |grad u|, wide stencil
  double max_boundary = 0;            // max over states of max |u(x',0)| / max |u|

  // Recomputed from the states on every call.
  std::vector<KatoTerms> norms() const;
  double kato_norm() const;
  // Largest two-sweep rate sqrt(gap_k / gap_{k-2}) once the gaps are above round-off; the plain
  // ratio when only two gaps exist; 0 otherwise.
  double contraction_factor() const;
};

Trajectory picard_solve(const GridField& u0, const PicardOptions& opt);

// Largest T with T^{1/2 + d/2q} + T^{1/2 - d/2q} <= gamma / ||u0||; q >= d.
// Returns +inf for zero data and 0 when no positive T qualifies (q = d, gamma <= ||u0||).
double existence_horizon(double u0_norm, double q, int d, double gamma);
// Scaled regime: rho^2 when ||u0||_(rho) <= gamma rho^{d/q - 1}; otherwise rho^2 times the
// unscaled horizon of the rescaled data, capped at rho^2.
double existence_horizon_scaled(double u0_norm_rho, double rho, double q, int d, double gamma);
// T^{1/2 + d/2q} + T^{1/2 - d/2q}
double horizon_shape(double T, double q, int d);
// Contraction factor predicted by the existence bound: ||u0|| horizon_shape(T) / gamma.
double a_priori_contraction(double u0_norm, double T, double q, int d, double gamma);

struct GammaCalibration {
  double gamma = 0;
  double threshold_amplitude = 0;  // min over directions, unit uloc-norm data
  std::vector<double> direction_thresholds;
  std::vector<double> direction_factors;  // measured factor at the common threshold
  int directions = 0;
  int contracting = 0;  // directions whose run at the threshold contracts
  double horizon = 0;
};

// Random solenoidal directions (unit L^q_uloc norm). Per direction, short runs find the linear
// regime of the factor; runs with the full sweep budget then locate the largest amplitude whose
// factor stays below 1. gamma converts the smallest threshold through the horizon shape at T.
GammaCalibration calibrate_gamma(GridPtr g, const PicardOptions& opt, int directions, std::uint64_t seed);

// Unit-norm random solenoidal direction used by the calibration.
GridField calibration_direction(GridPtr g, double q, std::uint64_t seed);

}  // namespace hs
