// SPDX-License-Identifier: Apache-2.0
#include "hs_stokes/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hs_stokes/quadrature.hpp"
#include "hs_stokes/vertical.hpp"

namespace hs {

double ContourQuadrature::apply_scalar(const std::function<cd(cd)>& g) const {
  cd s = 0;
  for (const auto& n : nodes) s += n.weight * g(n.lambda);
  return s.imag();
}

ContourQuadrature build_contour(double t, double eta, double kappa, int n_nodes, double tol) {
  require(t > 0, "contour needs t > 0");
  require(eta > kPi / 2 && eta < kPi, "eta must lie in (pi/2, pi)");
  require(kappa > 0 && tol > 0, "kappa and tol must be positive");
  ContourQuadrature c;
  c.t = t;
  c.eta = eta;
  c.kappa = std::min(kappa, 1.0 / t);
  c.n_nodes = n_nodes;
  c.tol = tol;
  std::vector<double> x, w;
  gauss_legendre(n_nodes, x, w);
  const cd dir = std::polar(1.0, eta);
  // |e^{t lambda}| = e^{t r cos eta} drops below tol/100 at this radius
  c.truncation_radius = std::max(2 * c.kappa, std::log(100.0 / tol) / (t * std::abs(std::cos(eta))));
  auto push = [&](cd lam, cd dl) { c.nodes.push_back({lam, dl / kPi, std::exp(t * lam) * dl / kPi}); };
  const int arc_panels = 2;
  for (int p = 0; p < arc_panels; ++p) {
    const double a = eta * p / arc_panels, b = eta * (p + 1) / arc_panels;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double th = 0.5 * (a + b) + 0.5 * (b - a) * x[i];
      const cd lam = std::polar(c.kappa, th);
      push(lam, cd(0, 1) * lam * (0.5 * (b - a) * w[i]));
    }
  }
  for (double a = c.kappa; a < c.truncation_radius;) {
    const double b = std::min(2 * a, c.truncation_radius);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = 0.5 * (a + b) + 0.5 * (b - a) * x[i];
      push(r * dir, dir * (0.5 * (b - a) * w[i]));
    }
    a = b;
  }
  c.scalar_error = std::abs(c.apply_scalar([](cd l) { return 1.0 / (l + 1.0); }) - std::exp(-t));
  c.meets_tol = c.scalar_error <= tol;
  return c;
}

ContourQuadrature build_contour(double t, const ContourSpec& s, double tol) {
  return build_contour(t, s.eta, s.kappa, s.n_nodes, tol);
}

StokesModes weighted_resolvent_sum(const SpectralField& f, const std::vector<cd>& lambdas,
                                   const std::vector<cd>& weights) {
  require(lambdas.size() == weights.size(), "one weight per resolvent parameter");
  StokesModes sum(f.grid);
  for (std::size_t j = 0; j < lambdas.size(); ++j) sum.axpy(weights[j], solve_modes(lambdas[j], f));
  return sum;
}

GridField imag_part(const GridField& f) {
  GridField r = f;
  for (auto& v : r.values) v = v.imag();
  return r;
}

namespace {

void check_admissible(const GridField& f) {
  const double dv = relative_divergence(f);
  const double bc = relative_normal_trace(f);
  const ResolventOptions o;
  if (dv > o.div_tol || bc > o.bc_tol) {
    std::ostringstream os;
    os << "semigroup data is not solenoidal: relative divergence " << dv << ", normal trace " << bc;
    fail(ErrorCode::not_solenoidal, os.str());
  }
}

SemigroupOutput apply_real(const GridField& f, const ContourQuadrature& c, const SemigroupRequest& req) {
  const SpectralField fs = to_spectral(f);
  StokesModes sum(f.grid), dsum(f.grid);
  for (const auto& n : c.nodes) {
    const StokesModes m = solve_modes(n.lambda, fs);
    sum.axpy(n.weight, m);
    if (req.time_derivative) dsum.axpy(n.weight * n.lambda, m);
  }
  SemigroupOutput out;
  out.u = imag_part(modes_velocity(sum));
  if (req.gradient) out.grad_u = imag_part(modes_velocity_gradient(sum));
  if (req.hessian) out.hess_u = imag_part(modes_velocity_hessian(sum));
  // differentiating e^{t lambda} brings down a factor lambda
  if (req.time_derivative) out.du_dt = imag_part(modes_velocity(dsum));
  return out;
}

GridField combine(const GridField& re, const GridField& im) {
  if (re.grid == nullptr) return re;
  return re + cd(0, 1) * im;
}

}  // namespace

SemigroupOutput apply_semigroup(const GridField& f, const ContourQuadrature& c, const SemigroupRequest& req) {
  require(f.components == f.grid->dimension, "semigroup data must be a d-vector field");
  if (req.check_input) check_admissible(f);
  if (f.max_imag() == 0) return apply_real(f, c, req);
  GridField re = f, im = f;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    re.values[i] = f.values[i].real();
    im.values[i] = f.values[i].imag();
  }
  const SemigroupOutput a = apply_real(re, c, req), b = apply_real(im, c, req);
  return {combine(a.u, b.u), combine(a.grad_u, b.grad_u), combine(a.hess_u, b.hess_u), combine(a.du_dt, b.du_dt)};
}

GridField apply_semigroup(double t, const GridField& f, const ContourQuadrature& c) {
  require(std::abs(t - c.t) <= 1e-14 * std::max(1.0, t), "contour was built for a different time");
  return apply_semigroup(f, c).u;
}

ContourQuadrature build_contour_window(double tau_min, double tau_max, const ContourSpec& spec, double tol) {
  require(tau_min > 0 && tau_max >= tau_min, "contour window needs 0 < tau_min <= tau_max");
  // nodes of the tau_min contour with the arc of the tau_max contour
  ContourQuadrature c = build_contour(tau_min, spec.eta, std::min(spec.kappa, 1.0 / tau_max), spec.n_nodes, tol);
  c.t = tau_max;
  for (auto& n : c.nodes) n.weight = std::exp(tau_max * n.lambda) * n.dl;
  const double hi = std::abs(c.apply_scalar([](cd l) { return 1.0 / (l + 1.0); }) - std::exp(-tau_max));
  c.scalar_error = std::max(c.scalar_error, hi);
  c.meets_tol = c.scalar_error <= tol;
  return c;
}

std::vector<SemigroupOutput> apply_semigroup_times(const GridField& f, const std::vector<double>& times,
                                                   const ContourSpec& spec, double tol, const SemigroupRequest& req) {
  require(f.components == f.grid->dimension, "semigroup data must be a d-vector field");
  require(f.max_imag() == 0, "multi-time semigroup needs real data");
  require(!times.empty(), "no times requested");
  if (req.check_input) check_admissible(f);
  const auto [lo, hi] = std::minmax_element(times.begin(), times.end());
  require(*lo > 0, "semigroup times must be positive");
  const ContourQuadrature c = build_contour_window(*lo, *hi, spec, tol);
  const SpectralField fs = to_spectral(f);
  std::vector<StokesModes> sum(times.size(), StokesModes(f.grid)), dsum;
  if (req.time_derivative) dsum.assign(times.size(), StokesModes(f.grid));
  for (const auto& n : c.nodes) {
    const StokesModes m = solve_modes(n.lambda, fs);
    for (std::size_t i = 0; i < times.size(); ++i) {
      const cd w = std::exp(times[i] * n.lambda) * n.dl;
      sum[i].axpy(w, m);
      if (req.time_derivative) dsum[i].axpy(w * n.lambda, m);
    }
  }
  std::vector<SemigroupOutput> out(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    out[i].u = imag_part(modes_velocity(sum[i]));
    if (req.gradient) out[i].grad_u = imag_part(modes_velocity_gradient(sum[i]));
    if (req.hessian) out[i].hess_u = imag_part(modes_velocity_hessian(sum[i]));
    if (req.time_derivative) out[i].du_dt = imag_part(modes_velocity(dsum[i]));
  }
  return out;
}

GridField heat_reflection_oracle(double t, const GridField& f) {
  require(t > 0, "heat flow needs t > 0");
  const auto& g = *f.grid;
  const VerticalBasis& b = *g.basis;
  const std::size_t nv = g.n_vertical();
  const auto& z = g.vertical_nodes;
  std::vector<double> gx, gw;
  gauss_legendre(20, gx, gw);
  // vertical operator on nodal values, shared by every tangential mode
  std::vector<double> M(nv * nv, 0.0);
  const double norm = 1.0 / std::sqrt(4 * kPi * t), reach = 12 * std::sqrt(t);
  parallel_for(nv, [&](std::size_t k) {
    const double y = z[k];
    for (std::size_t ci = 0; ci < b.n_cells(); ++ci) {
      const auto& cell = b.cell(ci);
      const double z0 = z[ci];
      if (z0 > y + reach || z0 + cell.h < y - reach) continue;
      for (std::size_t q = 0; q < gx.size(); ++q) {
        const double s = 0.5 * (gx[q] + 1);
        const double zz = z0 + s * cell.h;
        const double ker = norm * (std::exp(-(y - zz) * (y - zz) / (4 * t)) - std::exp(-(y + zz) * (y + zz) / (4 * t)));
        const double wq = 0.5 * gw[q] * cell.h * ker;
        for (int j = 0; j < cell.n; ++j) {
          double basis = 0, pw = 1;
          for (int p = 0; p < 4; ++p, pw *= s) basis += cell.fwd[j][p] * pw;
          M[k * nv + cell.nodes[j]] += wq * basis;
        }
      }
    }
  });
  const SpectralField fs = to_spectral(f);
  SpectralField out(f.grid, f.components);
  parallel_for(g.n_points(), [&](std::size_t m) {
    if (g.is_nyquist(m)) return;
    const auto xi = g.xi(m);
    const double damp = std::exp(-t * (xi[0] * xi[0] + xi[1] * xi[1]));
    for (int c = 0; c < f.components; ++c) {
      const cd* src = fs.profile(c, m);
      cd* dst = out.profile(c, m);
      for (std::size_t k = 0; k < nv; ++k) {
        cd acc = 0;
        for (std::size_t j = 0; j < nv; ++j) acc += M[k * nv + j] * src[j];
        dst[k] = damp * acc;
      }
    }
  });
  return to_physical(out);
}

GridField dirichlet_heat_by_contour(const GridField& f, const ContourQuadrature& c) {
  require(f.max_imag() == 0, "contour path expects real data");
  GridField sum(f.grid, f.components);
  for (const auto& n : c.nodes) sum = sum + n.weight * dirichlet_laplace_part(n.lambda, f);
  return imag_part(sum);
}

}  // namespace hs
