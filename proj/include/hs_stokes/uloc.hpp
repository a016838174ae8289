// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>
#include <vector>

#include "hs_stokes/core.hpp"

namespace hs {

inline constexpr double kInfExponent = -1.0;  // q < 0 stands for q = infinity

struct UlocSpec {
  double q = 2.0;    // >= 1, or kInfExponent
  double rho = 1.0;  // cube side; must tile the box length
};

// Sup over the cube lattice rho*(Z^{d-1} x Z_{>=0}) of the local L^q norm of |f|
// (Euclidean over components). Integrals treat the field as piecewise linear
// between nodes along every axis; cubes reaching past the top are clipped.
double uloc_norm(const GridField& f, const UlocSpec& spec);

// Per-cube values in lattice order, for diagnostics and tests.
std::vector<double> uloc_cube_norms(const GridField& f, const UlocSpec& spec);

struct KatoTerms {
  double t = 0;
  double uloc = 0;           // ||u||_{L^q_uloc}
  double weighted_sup = 0;   // t^{d/(2q)} ||u||_inf
  double weighted_grad = 0;  // t^{1/2} ||grad u||_{L^q_uloc}
  double total() const { return uloc + weighted_sup + weighted_grad; }
};
KatoTerms kato_terms(double t, const GridField& u, double q, double rho = 1.0);
// Discrete sup over the trajectory of the three weighted terms.
double kato_norm(const std::vector<std::pair<double, GridField>>& trajectory, double q, double rho = 1.0);

}  // namespace hs
