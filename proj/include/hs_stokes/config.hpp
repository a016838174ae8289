// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hs_stokes/core.hpp"

namespace hs {

struct GridSpec {
  double box_length = 2 * kPi;
  int n_tangential = 16;
  double height = 12.0;
  int n_cells = 96;
  double grading = 1.0;
};

struct ContourSpec {
  double eta = 3 * kPi / 4;
  double kappa = 0.5;
  int n_nodes = 16;  // Gauss points per panel
};

struct NsSpec {
  double horizon = 0.5;
  int time_steps = 8;
  double q = 2.0;
  double rho = 1.0;
  double gamma = 0.0;  // 0 = not yet calibrated
  int max_sweeps = 30;
  int calibrate_directions = 0;  // > 0 runs the threshold calibration before the solve
};

struct Tolerances {
  double quadrature = 1e-10;
  double fixed_point = 1e-8;
  double residual = 1e-8;  // acceptance level for solver residuals
};

// Named closed-form field from the catalogue with numeric parameters.
struct FieldSpec {
  std::string name = "div_free_bump";
  std::map<std::string, std::vector<double>> params;
  double get(const std::string& key, double fallback) const;
  std::vector<double> get_vec(const std::string& key, std::vector<double> fallback) const;
};

// Ranges for estimate sweeps.
struct SweepSpec {
  std::size_t n_samples = 1000;
  double lambda_min = 1e-2, lambda_max = 1e2;
  double radius_min = 1e-2, radius_max = 1e2;
  double t_min = 1e-2, t_max = 1e1;
  int n_points = 9;
  int trials = 4;
  int bilinear_trials = 16;  // product data spreads the ratio more widely
  std::vector<double> angles{0.0, kPi / 2, 3 * kPi / 4};  // arguments of lambda in resolvent sweeps
  std::vector<std::pair<double, double>> exponents{{2, 2}};  // (q, p) pairs; p < 0 means infinity
};

struct SolverConfig {
  int dimension = 2;
  GridSpec grid;
  SectorPoint lambda;
  ContourSpec contour;
  NsSpec ns;
  Tolerances tolerances;
  FieldSpec field;
  SweepSpec sweep;
};

// Parses and validates; throws Error(config) naming the offending key.
SolverConfig parse_config(const std::string& json_text);
SolverConfig load_config(const std::string& path);
std::string config_to_json(const SolverConfig& c);
// FNV-1a over the canonical JSON serialization.
std::uint64_t config_hash(const SolverConfig& c);

GridPtr grid_from_config(const SolverConfig& c);

}  // namespace hs
