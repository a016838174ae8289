// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <optional>

#include "hs_stokes/core.hpp"

namespace hs {

// sqrt(lambda + |xi|^2), principal branch.
cd omega(cd lambda, double xi_norm);
inline cd omega(const SectorPoint& l, double xi_norm) { return omega(l.value(), xi_norm); }

struct MultiplierSet {
  cd dl_whole;      // e^{-w|y-z|}/(2w)
  cd dl_reflected;  // e^{-w(y+z)}/(2w)
  cd nl_scalar;     // (e^{-|xi|y} - e^{-w y}) e^{-w z} / (w (w - |xi|)); 0 at xi = 0
  std::optional<cd> pressure_scalar;  // e^{-|xi|y} e^{-w z}(1/|xi| + 1/w); empty at xi = 0
  std::array<double, 2> xi{};
};

MultiplierSet resolvent_multipliers(const SectorPoint& lambda, std::array<double, 2> xi, double y_d,
                                    double z_d);

// Vertical profile of the nonlocal velocity factor and its y-derivatives:
//   M(y) = (e^{-k y} - e^{-w y}) / (w (w - k)),  k = |xi|, computed via 1/(w-k) = (w+k)/lambda.
struct NonlocalFactor {
  cd m, dm, ddm;
};
NonlocalFactor nonlocal_factor(cd lambda, cd w, double k, double y);

// Smooth cut-off: 1 on [0,2], 0 on [3,inf), smooth monotone bridge.
double cutoff_chi(double r);

}  // namespace hs
