// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hs_stokes/config.hpp"
#include "hs_stokes/core.hpp"
#include "hs_stokes/report.hpp"

namespace hs {

// Log-spaced sweep of a positive parameter (|lambda| or t). The base sample is n_points values
// times `trials` random fields; the doubled sample inserts the log midpoints and doubles the
// trials; the extended sample keeps the base spacing and trials and adds at least one decade at
// each end.
struct EstimateSweep {
  double min = 1e-2, max = 1e2;
  int n_points = 9;
  int trials = 4;
  std::vector<double> angles{0.0};  // arguments of lambda; ignored by time sweeps
  std::vector<std::pair<double, double>> exponents{{2, 2}};  // (q, p), p < 0 is infinity
  double rho = 1.0;
  std::uint64_t seed = 1;
  ContourSpec contour;
  double quadrature_tol = 1e-10;
  double stability_limit = 1.25;
  double shape_limit = 0.25;
};

// One inequality lhs <= C shape rhs evaluated at one sample.
struct Measurement {
  std::string id;
  double lhs = 0;
  double rhs = 0;    // data norm
  double shape = 1;  // parameter dependence of the bound
  bool in_range = true;  // exponents satisfy the stated hypotheses
};

using MeasurementProbe = std::function<std::vector<Measurement>(double param, double angle, int trial)>;
// All parameters of one (angle, trial) at once; returns one list per parameter.
using BatchProbe =
    std::function<std::vector<std::vector<Measurement>>(const std::vector<double>& params, double angle, int trial)>;

// Runs the probe over the base, doubled and extended samples and reduces one report per id:
// fitted constant = max ratio on the base sample, stability = doubled / base, shape residual =
// extended / base - 1. Samples with rhs = 0 are excluded and listed.
std::vector<EstimateReport> fit_estimates(const EstimateSweep& sweep, const MeasurementProbe& probe);
std::vector<EstimateReport> fit_estimates(const EstimateSweep& sweep, const BatchProbe& probe);

// Parameter values of the three samples (exposed for tests).
struct SweepLattice {
  std::vector<double> base, doubled, extended;
};
SweepLattice sweep_lattice(const EstimateSweep& sweep);

// Resolvent bounds: |lambda| u, |lambda|^{1/2} grad u, second derivatives and pressure gradient
// with the logarithmic factor, and the mixed-exponent bounds on u and grad u.
std::vector<EstimateReport> fit_resolvent_estimates(GridPtr g, const EstimateSweep& sweep);
// Semigroup bounds over t: u, t^{1/2} grad u, t du/dt, t / log(e + t) second derivatives, and
// the mixed-exponent bounds.
std::vector<EstimateReport> fit_semigroup_estimates(GridPtr g, const EstimateSweep& sweep);
// (lambda + A)^{-1} P div (u (x) v) in the mixed norm and its gradient against |u||grad v| + |v||grad u|.
std::vector<EstimateReport> fit_bilinear_resolvent_estimates(GridPtr g, const EstimateSweep& sweep);
// e^{-tA} P div (u (x) v) and its gradient in the mixed norm, and the gradient against the
// product norms.
std::vector<EstimateReport> fit_bilinear_estimates(GridPtr g, const EstimateSweep& sweep);

// Shape factors.
double log_loss_shape(double lambda_abs);  // 1 + e^{-sqrt|lambda|} |log|lambda||
double mixed_gain(double s, int d, double q, double p);  // s^{(d/2)(1/q - 1/p)}
std::string exponent_label(double q);  // "2", "inf"

// Trial fields used by the sweeps (unit max norm, no tangential mean flow).
GridField estimate_trial_field(GridPtr g, std::uint64_t seed, int modes = 2);

}  // namespace hs
