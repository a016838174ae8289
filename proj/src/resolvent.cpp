// SPDX-License-Identifier: Apache-2.0
#include "hs_stokes/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hs_stokes/quadrature.hpp"
#include "hs_stokes/symbols.hpp"
#include "hs_stokes/vertical.hpp"

namespace hs {

StokesModes::StokesModes(GridPtr g)
    : grid(g), u(g, g->dimension), uy(g, g->dimension), uyy(g, g->dimension), p_coef(g->n_points(), 0.0) {}

void StokesModes::axpy(cd a, const StokesModes& o) {
  require(grid->same_as(*o.grid), "mode sets live on different grids");
  for (std::size_t i = 0; i < u.modal_values.size(); ++i) {
    u.modal_values[i] += a * o.u.modal_values[i];
    uy.modal_values[i] += a * o.uy.modal_values[i];
    uyy.modal_values[i] += a * o.uyy.modal_values[i];
  }
  for (std::size_t m = 0; m < p_coef.size(); ++m) p_coef[m] += a * o.p_coef[m];
}

void StokesModes::scale(cd a) {
  for (auto* s : {&u, &uy, &uyy})
    for (auto& v : s->modal_values) v *= a;
  for (auto& p : p_coef) p *= a;
}

StokesModes solve_modes(cd lambda, const SpectralField& f) {
  const auto& g = *f.grid;
  const int d = g.dimension;
  require(f.components == d, "resolvent data must be a d-vector field");
  StokesModes out(f.grid);
  const VerticalBasis& b = *g.basis;
  const std::size_t nv = g.n_vertical();
  const auto& z = g.vertical_nodes;
  parallel_for(g.n_points(), [&](std::size_t m) {
    if (g.is_nyquist(m)) return;
    const auto xi = g.xi(m);
    const double k = std::hypot(xi[0], xi[1]);
    const cd w = omega(lambda, k);
    const ExpCellWeights W = exp_cell_weights(b, w);
    std::vector<cd> A(nv), B(nv);
    std::array<cd, 3> C{};
    for (int c = 0; c < d; ++c) {
      const cd* fp = f.profile(c, m);
      exp_sweep_into(b, W, fp, A.data(), B.data());
      C[c] = B[0];
      cd* u = out.u.profile(c, m);
      cd* uy = out.uy.profile(c, m);
      cd* uyy = out.uyy.profile(c, m);
      for (std::size_t j = 0; j < nv; ++j) {
        const cd e = W.from_base[j] * C[c];
        u[j] = (A[j] + B[j] - e) / (2.0 * w);
        uy[j] = 0.5 * (B[j] - A[j] + e);
        uyy[j] = w * w * u[j] - fp[j];
      }
    }
    if (k == 0) return;  // DC: Dirichlet-Laplace part only, pressure gauged to 0
    cd S = 0;
    for (int a = 0; a < d - 1; ++a) S += xi[a] * C[a];
    for (std::size_t j = 0; j < nv; ++j) {
      const NonlocalFactor nf = nonlocal_factor(lambda, w, k, z[j]);
      for (int a = 0; a < d - 1; ++a) {
        const double r = xi[a] / k;
        out.u.at(a, m, j) += r * nf.m * S;
        out.uy.at(a, m, j) += r * nf.dm * S;
        out.uyy.at(a, m, j) += r * nf.ddm * S;
      }
      const cd iS(-S.imag(), S.real());
      out.u.at(d - 1, m, j) += nf.m * iS;
      out.uy.at(d - 1, m, j) += nf.dm * iS;
      out.uyy.at(d - 1, m, j) += nf.ddm * iS;
    }
    out.p_coef[m] = cd(0, 1) * S * (1.0 / k + 1.0 / w);
  });
  return out;
}

GridField modes_velocity(const StokesModes& m) { return to_physical(m.u); }

GridField modes_velocity_gradient(const StokesModes& m) {
  const auto& g = *m.grid;
  const int d = g.dimension;
  const std::size_t nv = g.n_vertical();
  SpectralField ds(m.grid, d * d);
  for (int c = 0; c < d; ++c) {
    for (std::size_t q = 0; q < g.n_points(); ++q) {
      const auto xi = g.xi(q);
      const cd* src = m.u.profile(c, q);
      for (int j = 0; j < d - 1; ++j) {
        cd* dst = ds.profile(c * d + j, q);
        for (std::size_t k = 0; k < nv; ++k) dst[k] = cd(0, xi[j]) * src[k];
      }
      std::copy(m.uy.profile(c, q), m.uy.profile(c, q) + nv, ds.profile(c * d + d - 1, q));
    }
  }
  return to_physical(ds);
}

GridField modes_velocity_hessian(const StokesModes& m) {
  const auto& g = *m.grid;
  const int d = g.dimension;
  const std::size_t nv = g.n_vertical();
  SpectralField hs(m.grid, d * d * d);
  for (int c = 0; c < d; ++c) {
    for (std::size_t q = 0; q < g.n_points(); ++q) {
      const auto xi = g.xi(q);
      const cd* u = m.u.profile(c, q);
      const cd* uy = m.uy.profile(c, q);
      const cd* uyy = m.uyy.profile(c, q);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          cd* dst = hs.profile((c * d + i) * d + j, q);
          const int nvert = (i == d - 1) + (j == d - 1);
          const cd* src = nvert == 0 ? u : (nvert == 1 ? uy : uyy);
          cd factor = 1;
          if (i < d - 1) factor *= cd(0, xi[i]);
          if (j < d - 1) factor *= cd(0, xi[j]);
          for (std::size_t k = 0; k < nv; ++k) dst[k] = factor * src[k];
        }
    }
  }
  return to_physical(hs);
}

namespace {

SpectralField pressure_spectral(const StokesModes& m, bool gradient) {
  const auto& g = *m.grid;
  const int d = g.dimension;
  const std::size_t nv = g.n_vertical();
  SpectralField s(m.grid, gradient ? d : 1);
  for (std::size_t q = 0; q < g.n_points(); ++q) {
    if (m.p_coef[q] == cd(0)) continue;
    const auto xi = g.xi(q);
    const double k = std::hypot(xi[0], xi[1]);
    for (std::size_t j = 0; j < nv; ++j) {
      const cd p = m.p_coef[q] * std::exp(-k * g.vertical_nodes[j]);
      if (!gradient) {
        s.at(0, q, j) = p;
        continue;
      }
      for (int a = 0; a < d - 1; ++a) s.at(a, q, j) = cd(0, xi[a]) * p;
      s.at(d - 1, q, j) = -k * p;
    }
  }
  return s;
}

}  // namespace

GridField modes_pressure(const StokesModes& m) { return to_physical(pressure_spectral(m, false)); }
GridField modes_pressure_gradient(const StokesModes& m) { return to_physical(pressure_spectral(m, true)); }

double modes_divergence(const StokesModes& m) {
  const auto& g = *m.grid;
  const int d = g.dimension;
  const std::size_t nv = g.n_vertical();
  SpectralField s(m.grid, 1);
  for (std::size_t q = 0; q < g.n_points(); ++q) {
    const auto xi = g.xi(q);
    for (std::size_t j = 0; j < nv; ++j) {
      cd v = m.uy.at(d - 1, q, j);
      for (int a = 0; a < d - 1; ++a) v += cd(0, xi[a]) * m.u.at(a, q, j);
      s.at(0, q, j) = v;
    }
  }
  return to_physical(s).max_abs();
}

double modes_boundary(const StokesModes& m) {
  const GridField u = to_physical(m.u);
  double mx = 0;
  for (int c = 0; c < u.components; ++c)
    for (std::size_t q = 0; q < m.grid->n_points(); ++q) mx = std::max(mx, std::abs(u.at(c, q, 0)));
  return mx;
}

double relative_divergence(const GridField& f) {
  const GridField gr = gradient(f);
  const double scale = gr.max_abs();
  return scale > 0 ? divergence(f).max_abs() / scale : 0.0;
}

double relative_normal_trace(const GridField& f) {
  const int d = f.grid->dimension;
  const double scale = f.max_abs();
  if (scale == 0) return 0;
  double mx = 0;
  for (std::size_t q = 0; q < f.grid->n_points(); ++q) mx = std::max(mx, std::abs(f.at(d - 1, q, 0)));
  return mx / scale;
}

namespace {

double pde_residual(cd lambda, const StokesModes& m, const SpectralField& f) {
  const auto& g = *m.grid;
  const int d = g.dimension;
  const std::size_t nv = g.n_vertical();
  SpectralField r(m.grid, d);
  for (std::size_t q = 0; q < g.n_points(); ++q) {
    if (g.is_nyquist(q)) continue;
    const auto xi = g.xi(q);
    const double k = std::hypot(xi[0], xi[1]);
    for (std::size_t j = 1; j + 1 < nv; ++j) {
      const cd p = m.p_coef[q] * std::exp(-k * g.vertical_nodes[j]);
      for (int c = 0; c < d; ++c) {
        const cd gp = c < d - 1 ? cd(0, xi[c]) * p : -k * p;
        r.at(c, q, j) = (lambda + k * k) * m.u.at(c, q, j) - m.uyy.at(c, q, j) + gp - f.at(c, q, j);
      }
    }
  }
  return to_physical(r).max_abs();
}

}  // namespace

ResolventSolution solve_resolvent(const SectorPoint& lambda, const GridField& f, const ResolventOptions& opt) {
  const auto& g = *f.grid;
  const int d = g.dimension;
  require(f.components == d, "resolvent data must be a d-vector field");
  ResolventSolution sol;
  ResolventDiagnostics& dg = sol.diagnostics;
  dg.input_divergence = relative_divergence(f);
  dg.input_boundary = relative_normal_trace(f);
  if (opt.check_input) {
    if (dg.input_divergence > opt.div_tol) {
      std::ostringstream os;
      os << "data is not divergence-free: relative divergence " << dg.input_divergence;
      fail(ErrorCode::not_solenoidal, os.str());
    }
    if (dg.input_boundary > opt.bc_tol) {
      std::ostringstream os;
      os << "data has a nonzero normal trace: relative trace " << dg.input_boundary;
      fail(ErrorCode::not_solenoidal, os.str());
    }
  }
  const cd l = lambda.value();
  const SpectralField fs = to_spectral(f);
  sol.modes = solve_modes(l, fs);
  sol.u = modes_velocity(sol.modes);
  sol.grad_p = modes_pressure_gradient(sol.modes);
  sol.p = modes_pressure(sol.modes);
  dg.tail_bound = std::exp(-omega(l, 0.0).real() * g.height());
  if (opt.diagnostics) {
    const double fs_max = std::max(f.max_abs(), 1e-300);
    dg.pde_residual = pde_residual(l, sol.modes, fs) / fs_max;
    dg.div_residual = modes_divergence(sol.modes) / fs_max;
    dg.bc_residual = modes_boundary(sol.modes) / fs_max;
    if (!opt.decay_radii.empty()) dg.pressure_decay_profile = pressure_decay_profile(sol.modes, opt.decay_radii);
  }
  return sol;
}

GridField dirichlet_laplace_part(cd lambda, const GridField& f) {
  const auto& g = *f.grid;
  const VerticalBasis& b = *g.basis;
  const std::size_t nv = g.n_vertical();
  const SpectralField fs = to_spectral(f);
  SpectralField out(f.grid, f.components);
  parallel_for(g.n_points(), [&](std::size_t m) {
    if (g.is_nyquist(m)) return;
    const auto xi = g.xi(m);
    const cd w = omega(lambda, std::hypot(xi[0], xi[1]));
    const ExpCellWeights W = exp_cell_weights(b, w);
    std::vector<cd> A(nv), B(nv);
    for (int c = 0; c < f.components; ++c) {
      exp_sweep_into(b, W, fs.profile(c, m), A.data(), B.data());
      cd* u = out.profile(c, m);
      for (std::size_t j = 0; j < nv; ++j) u[j] = (A[j] + B[j] - W.from_base[j] * B[0]) / (2.0 * w);
    }
  });
  return to_physical(out);
}

GridField dirichlet_laplace_part(const SectorPoint& lambda, const GridField& f) {
  return dirichlet_laplace_part(lambda.value(), f);
}

std::vector<cd> vertical_convolve(const VerticalBasis& b, cd lambda, const std::vector<cd>& profile,
                                  ConvolveMode mode, double k) {
  require(profile.size() == b.nodes().size(), "profile length must match the vertical nodes");
  require(k >= 0, "wavenumber modulus must be nonnegative");
  if ((mode == ConvolveMode::nonlocal_y || mode == ConvolveMode::pressure) && k == 0)
    fail(ErrorCode::invalid_argument, "nonlocal and pressure multipliers exclude the DC mode");
  const std::size_t nv = profile.size();
  const cd w = omega(lambda, k);
  const ExpCellWeights W = exp_cell_weights(b, w);
  std::vector<cd> A(nv), B(nv), out(nv);
  exp_sweep_into(b, W, profile.data(), A.data(), B.data());
  const cd C = B[0];
  const auto& z = b.nodes();
  for (std::size_t j = 0; j < nv; ++j) {
    switch (mode) {
      case ConvolveMode::whole: out[j] = (A[j] + B[j]) / (2.0 * w); break;
      case ConvolveMode::reflected: out[j] = W.from_base[j] * C / (2.0 * w); break;
      case ConvolveMode::nonlocal_y: out[j] = nonlocal_factor(lambda, w, k, z[j]).m * C; break;
      case ConvolveMode::pressure: out[j] = std::exp(-k * z[j]) * (1.0 / k + 1.0 / w) * C; break;
    }
  }
  return out;
}

std::vector<std::pair<double, double>> pressure_decay_profile(const StokesModes& m, const std::vector<double>& radii,
                                                              std::array<double, 2> injected) {
  const auto& g = *m.grid;
  const int d = g.dimension;
  std::vector<double> gx, gw;
  gauss_legendre(20, gx, gw);
  // tangential quadrature on |x'| < 1
  struct TPoint {
    double x1, x2, w;
  };
  std::vector<TPoint> tp;
  if (d == 2) {
    for (std::size_t i = 0; i < gx.size(); ++i) tp.push_back({gx[i], 0.0, gw[i]});
  } else {
    // polar: r in (0,1), angle uniform
    const int na = 40;
    for (std::size_t i = 0; i < gx.size(); ++i) {
      const double r = 0.5 * (gx[i] + 1);
      for (int a = 0; a < na; ++a) {
        const double th = 2 * kPi * (a + 0.5) / na;
        tp.push_back({r * std::cos(th), r * std::sin(th), 0.5 * gw[i] * r * 2 * kPi / na});
      }
    }
  }
  std::vector<std::size_t> active;
  for (std::size_t q = 0; q < g.n_points(); ++q)
    if (m.p_coef[q] != cd(0)) active.push_back(q);
  std::vector<std::pair<double, double>> out;
  for (double R : radii) {
    require(R >= 0, "decay radius must be nonnegative");
    if (R + 1 > g.height()) fail(ErrorCode::invalid_argument, "decay radius exceeds the grid height");
    double total = 0;
    for (std::size_t iv = 0; iv < gx.size(); ++iv) {
      const double y = R + 0.5 * (gx[iv] + 1);
      const double wy = 0.5 * gw[iv];
      for (const auto& t : tp) {
        std::array<cd, 2> gp{injected[0], d == 3 ? injected[1] : 0.0};
        for (std::size_t q : active) {
          const auto xi = g.xi(q);
          const double k = std::hypot(xi[0], xi[1]);
          const cd pv = m.p_coef[q] * std::exp(cd(-k * y, xi[0] * t.x1 + xi[1] * t.x2));
          for (int a = 0; a < d - 1; ++a) gp[a] += cd(0, xi[a]) * pv;
        }
        total += wy * t.w * std::sqrt(std::norm(gp[0]) + std::norm(gp[1]));
      }
    }
    out.push_back({R, total});
  }
  return out;
}

std::vector<std::pair<double, double>> constant_gradient_profile(std::array<double, 2> D, int d,
                                                                 const std::vector<double>& radii) {
  const double area = d == 2 ? 2.0 : kPi;
  const double mag = std::hypot(D[0], d == 3 ? D[1] : 0.0);
  std::vector<std::pair<double, double>> out;
  for (double R : radii) out.push_back({R, mag * area});
  return out;
}

double loglog_slope(const std::vector<std::pair<double, double>>& prof) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& [R, v] : prof) {
    if (!(R > 0) || !(v > 0)) continue;
    const double x = std::log(R), y = std::log(v);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) return 0;
  const double den = n * sxx - sx * sx;
  return den != 0 ? (n * sxy - sx * sy) / den : 0;
}

}  // namespace hs
