// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hs_stokes/core.hpp"

namespace hs {

// Tangentially periodic tensor F with index a*d + g, plus the wall conditions
// F_{ad} = F_{dg} = d_d F_{dd} = 0 measured on the grid.
struct TensorField {
  GridField F;
  bool tangential_normal_zero = false;  // F_{a d}(x', 0) = 0
  bool normal_row_zero = false;         // F_{d g}(x', 0) = 0
  bool normal_flux_flat = false;        // d_d F_{dd}(x', 0) = 0
  double trace_tangential_normal = 0;   // measured, relative to max |F|
  double trace_normal_row = 0;
  double trace_normal_flux = 0;         // relative to max |d_d F_{dd}|
  bool admissible() const { return tangential_normal_zero && normal_row_zero && normal_flux_flat; }
};

// The flux condition is measured with the one-sided interpolant derivative at the
// wall, accurate to O(h^3), hence the looser default.
TensorField make_tensor(const GridField& F, double tol = 1e-4);
// F_{ag} = u_a v_g
// F_{ag} = u_a v_g; the wall flux of u_d v_d is measured by the product rule.
TensorField tensor_product(const GridField& u, const GridField& v, double tol = 1e-4);

struct ProjectionResult {
  GridField field;
  double div_residual = 0;   // max |div| / max |field|, vertical derivative taken analytically
  double normal_trace = 0;   // max |field_d(x', 0)| / max |field|
};

// Helmholtz-Leray projection mode by mode with exact vertical exponential integrals.
ProjectionResult project_with_diagnostics(const GridField& f);
GridField project(const GridField& f);

// P div F from the integrated-by-parts formulas: local terms plus exponential
// integrals of F itself. Rejects tensors violating the wall conditions.
ProjectionResult project_div_with_diagnostics(const TensorField& F);
GridField project_div(const TensorField& F);

// div F with (div F)_g = sum_a d_a F_{ag}; used as the composition oracle.
GridField tensor_divergence(const GridField& F);

// Max relative gap of the two-piece frequency split of m(xi) e^{-t|xi|}, m one of
// xi_1^2, xi_1 xi_{d-1}, |xi|^2 (selector 0, 1, 2).
double symbol_split_identity(double theta, cd lambda, const std::vector<std::array<double, 2>>& xi_samples,
                             const std::vector<double>& t_samples, int symbol = 2);

}  // namespace hs
