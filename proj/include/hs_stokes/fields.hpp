// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "hs_stokes/config.hpp"
#include "hs_stokes/core.hpp"

namespace hs {

// Closed-form fields sampled at the grid nodes. Catalogue names:
//   zero               components (default d)
//   constant           value (vector, one entry per component)
//   gaussian_bump      center, width, amplitude, components (default 1)
//   div_free_bump      center, width, kappa, amplitude, tilt (d=3 potential direction)
//   manufactured       lambda [re, im], ell, mode: forcing of the known Stokes pair below
//   parasitic          D (tangential), lambda [re, im]: shear profile of the linear-pressure family
//   random_solenoidal  seed, ell, modes, amplitude: divergence-free, vanishing on the wall
GridField sample_field(GridPtr g, const FieldSpec& spec);
std::vector<std::string> field_catalog();

// Known resolvent pair: u = curl of y^2 e^{-y/ell} sin(k x1), with its own pressure.
// f = lambda u - Lap u + grad p is solenoidal with zero normal trace.
struct ManufacturedPair {
  GridField u, p, grad_p, f;
};
ManufacturedPair manufactured_pair(GridPtr g, cd lambda, double ell, int mode);

}  // namespace hs
