// SPDX-License-Identifier: Apache-2.0
#include "hs_stokes/symbols.hpp"

#include <cmath>

#include "hs_stokes/vertical.hpp"

namespace hs {

cd omega(cd lambda, double xi_norm) { return std::sqrt(lambda + xi_norm * xi_norm); }

NonlocalFactor nonlocal_factor(cd lambda, cd w, double k, double y) {
  // w - k = lambda / (w + k); e^{-k y} - e^{-w y} = e^{-k y} (1 - e^{-(w-k) y})
  const cd wk = w + k;
  const cd diff = lambda / wk;
  const cd ek = std::exp(-k * y);
  const cd ew = std::exp(-w * y);
  const cd m = -ek * expm1c(-diff * y) * wk / (lambda * w);
  const cd dm = -k * m + ew / w;
  const cd ddm = k * k * m - ew * wk / w;
  return {m, dm, ddm};
}

MultiplierSet resolvent_multipliers(const SectorPoint& lambda, std::array<double, 2> xi, double y_d,
                                    double z_d) {
  require(y_d >= 0 && z_d >= 0, "heights must be nonnegative");
  const cd l = lambda.value();
  const double k = std::hypot(xi[0], xi[1]);
  const cd w = omega(l, k);
  MultiplierSet s;
  s.xi = xi;
  s.dl_whole = std::exp(-w * std::abs(y_d - z_d)) / (2.0 * w);
  s.dl_reflected = std::exp(-w * (y_d + z_d)) / (2.0 * w);
  const cd ez = std::exp(-w * z_d);
  s.nl_scalar = k > 0 ? nonlocal_factor(l, w, k, y_d).m * ez : cd(0);
  if (k > 0) s.pressure_scalar = std::exp(-k * y_d) * ez * (1.0 / k + 1.0 / w);
  return s;
}

double cutoff_chi(double r) {
  if (r <= 2.0) return 1.0;
  if (r >= 3.0) return 0.0;
  auto psi = [](double x) { return x > 0 ? std::exp(-1.0 / x) : 0.0; };
  const double a = psi(3.0 - r), b = psi(r - 2.0);
  return a / (a + b);
}

}  // namespace hs
