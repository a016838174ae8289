// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <vector>

#include "hs_stokes/core.hpp"

namespace hs {

// M_k(x) = int_0^1 e^{-x t} t^k dt, k = 0..3, for Re x >= 0.
std::array<cd, 4> exp_moments(cd x);
// e^z - 1 without cancellation for small |z|.
cd expm1c(cd z);

// Local cubic Lagrange data per vertical cell.
class VerticalBasis {
 public:
  struct Cell {
    int n = 4;                  // stencil size (<= 4 on very small grids)
    std::array<int, 4> nodes{};  // stencil node indices
    double h = 0;
    // p(t) = sum_j phi[nodes[j]] * sum_k fwd[j][k] t^k,  t = (z - z_i)/h
    double fwd[4][4]{};
    // same polynomial in s = 1 - t
    double bwd[4][4]{};
  };

  explicit VerticalBasis(const std::vector<double>& nodes);
  std::size_t n_cells() const { return cells_.size(); }
  const Cell& cell(std::size_t i) const { return cells_[i]; }
  const std::vector<double>& nodes() const { return nodes_; }

  // Derivative of the interpolant at the nodes (average of the one-sided cell
  // derivatives at interior nodes).
  void derivative(const cd* phi, cd* out) const;
  // Value of the interpolant at height z.
  cd evaluate(const cd* phi, double z) const;

 private:
  std::vector<double> nodes_;
  std::vector<Cell> cells_;
};

// Per-cell weights of the exponential cell integrals for one decay rate.
struct ExpCellWeights {
  cd rate;
  std::vector<cd> decay;                // e^{-rate h_i}
  std::vector<std::array<cd, 4>> fwd;   // int_cell e^{-rate (z - z_i)} phi dz
  std::vector<std::array<cd, 4>> bwd;   // int_cell e^{-rate (z_{i+1} - z)} phi dz
  std::vector<cd> from_base;            // e^{-rate z_k} at nodes
};

ExpCellWeights exp_cell_weights(const VerticalBasis& b, cd rate);

// Causal and anti-causal exponential integrals of a nodal profile:
//   A_k = int_0^{z_k} e^{-r (z_k - z)} phi,  B_k = int_{z_k}^H e^{-r (z - z_k)} phi,
//   C = int_0^H e^{-r z} phi = B_0.
struct ExpSweep {
  std::vector<cd> A, B;
  cd C;
};
ExpSweep exp_sweep(const VerticalBasis& b, const ExpCellWeights& w, const cd* phi);
void exp_sweep_into(const VerticalBasis& b, const ExpCellWeights& w, const cd* phi, cd* A, cd* B);

}  // namespace hs
