// SPDX-License-Identifier: Apache-2.0
#include "hs_stokes/leray.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hs_stokes/symbols.hpp"
#include "hs_stokes/vertical.hpp"

namespace hs {

namespace {

// Exponential sweeps at a real rate k of one profile: A = causal, B = anti-causal,
// R = e^{-k z} int_0^H e^{-k s} phi (reflected).
struct Sweeps {
  std::vector<cd> A, B, R;
};

Sweeps sweep(const VerticalBasis& b, const ExpCellWeights& W, const std::vector<cd>& phi) {
  const std::size_t n = phi.size();
  Sweeps s{std::vector<cd>(n), std::vector<cd>(n), std::vector<cd>(n)};
  exp_sweep_into(b, W, phi.data(), s.A.data(), s.B.data());
  for (std::size_t j = 0; j < n; ++j) s.R[j] = W.from_base[j] * s.B[0];
  return s;
}

std::vector<cd> profile_copy(const SpectralField& f, int c, std::size_t m) {
  const cd* p = f.profile(c, m);
  return std::vector<cd>(p, p + f.grid->n_vertical());
}

double wall_max(const GridField& f, int c) {
  double mx = 0;
  for (std::size_t m = 0; m < f.grid->n_points(); ++m) mx = std::max(mx, std::abs(f.at(c, m, 0)));
  return mx;
}

// Output per mode: value profiles and the vertical derivative of the normal component.
struct ModeOut {
  SpectralField val;
  SpectralField dnormal;
};

ProjectionResult finish(const ModeOut& o) {
  const auto& g = *o.val.grid;
  const int d = g.dimension;
  const std::size_t nv = g.n_vertical();
  SpectralField div(o.val.grid, 1);
  for (std::size_t m = 0; m < g.n_points(); ++m) {
    const auto xi = g.xi(m);
    for (std::size_t j = 0; j < nv; ++j) {
      cd v = o.dnormal.at(0, m, j);
      for (int a = 0; a < d - 1; ++a) v += cd(0, xi[a]) * o.val.at(a, m, j);
      div.at(0, m, j) = v;
    }
  }
  ProjectionResult r;
  r.field = to_physical(o.val);
  const double scale = std::max(r.field.max_abs(), 1e-300);
  r.div_residual = to_physical(div).max_abs() / scale;
  r.normal_trace = wall_max(r.field, d - 1) / scale;
  return r;
}

}  // namespace

TensorField make_tensor(const GridField& F, double tol) {
  const int d = F.grid->dimension;
  require(F.components == d * d, "tensor field needs d*d components");
  TensorField t;
  t.F = F;
  const double scale = std::max(F.max_abs(), 1e-300);
  double tn = 0, nr = 0;
  for (int a = 0; a < d; ++a) {
    tn = std::max(tn, wall_max(F, a * d + d - 1));
    nr = std::max(nr, wall_max(F, (d - 1) * d + a));
  }
  t.trace_tangential_normal = tn / scale;
  t.trace_normal_row = nr / scale;
  const GridField gdd = gradient(component(F, d * d - 1));
  const GridField ddd = component(gdd, d - 1);
  t.trace_normal_flux = wall_max(ddd, 0) / std::max(ddd.max_abs(), 1e-300);
  if (ddd.max_abs() == 0) t.trace_normal_flux = 0;
  t.tangential_normal_zero = t.trace_tangential_normal <= tol;
  t.normal_row_zero = t.trace_normal_row <= tol;
  t.normal_flux_flat = t.trace_normal_flux <= tol;
  return t;
}

TensorField tensor_product(const GridField& u, const GridField& v, double tol) {
  const int d = u.grid->dimension;
  require(u.grid->same_as(*v.grid) && u.components == d && v.components == d, "tensor product needs two d-vectors");
  GridField F(u.grid, d * d);
  const std::size_t np = u.grid->n_points(), nv = u.grid->n_vertical();
  for (int a = 0; a < d; ++a)
    for (int c = 0; c < d; ++c)
      for (std::size_t m = 0; m < np; ++m)
        for (std::size_t k = 0; k < nv; ++k) F.at(a * d + c, m, k) = u.at(a, m, k) * v.at(c, m, k);
  TensorField t = make_tensor(F, tol);
  // wall flux of u_d v_d by the product rule, free of the interpolation error of the product
  const GridField du = component(gradient(component(u, d - 1)), d - 1);
  const GridField dv = component(gradient(component(v, d - 1)), d - 1);
  double flux = 0;
  for (std::size_t m = 0; m < np; ++m)
    flux = std::max(flux, std::abs(du.at(0, m, 0) * v.at(d - 1, m, 0) + u.at(d - 1, m, 0) * dv.at(0, m, 0)));
  const double scale = component(gradient(component(F, d * d - 1)), d - 1).max_abs();
  t.trace_normal_flux = scale == 0 ? 0.0 : flux / scale;
  t.normal_flux_flat = t.trace_normal_flux <= tol;
  return t;
}

GridField tensor_divergence(const GridField& F) {
  const int d = F.grid->dimension;
  require(F.components == d * d, "tensor field needs d*d components");
  const GridField gr = gradient(F);  // component (a*d + c)*d + j
  GridField out(F.grid, d);
  for (int c = 0; c < d; ++c)
    for (int a = 0; a < d; ++a) {
      const int idx = (a * d + c) * d + a;
      for (std::size_t i = 0; i < out.grid->n_points() * out.grid->n_vertical(); ++i)
        out.values[c * out.grid->n_points() * out.grid->n_vertical() + i] +=
            gr.values[static_cast<std::size_t>(idx) * out.grid->n_points() * out.grid->n_vertical() + i];
    }
  return out;
}

ProjectionResult project_with_diagnostics(const GridField& f) {
  const auto& g = *f.grid;
  const int d = g.dimension;
  require(f.components == d, "projection needs a d-vector field");
  const SpectralField fs = to_spectral(f);
  const std::size_t nv = g.n_vertical();
  ModeOut o{SpectralField(f.grid, d), SpectralField(f.grid, 1)};
  const VerticalBasis& b = *g.basis;
  parallel_for(g.n_points(), [&](std::size_t m) {
    if (g.is_nyquist(m)) return;
    const auto xi = g.xi(m);
    const double k = std::hypot(xi[0], xi[1]);
    if (k == 0) {
      // mean mode: the gradient part carries the whole normal component
      for (int a = 0; a < d - 1; ++a) std::copy(fs.profile(a, m), fs.profile(a, m) + nv, o.val.profile(a, m));
      return;
    }
    std::vector<cd> u(nv), fd = profile_copy(fs, d - 1, m);
    for (std::size_t j = 0; j < nv; ++j) {
      cd s = 0;
      for (int a = 0; a < d - 1; ++a) s += cd(0, xi[a]) * fs.at(a, m, j);
      u[j] = s;
    }
    const ExpCellWeights W = exp_cell_weights(b, cd(k));
    const Sweeps su = sweep(b, W, u), sd = sweep(b, W, fd);
    for (std::size_t j = 0; j < nv; ++j) {
      const cd tang = (su.A[j] + su.B[j] + su.R[j]) / (2 * k) + 0.5 * (-sd.A[j] + sd.B[j] + sd.R[j]);
      for (int a = 0; a < d - 1; ++a) o.val.at(a, m, j) = fs.at(a, m, j) + cd(0, xi[a]) * tang;
      o.val.at(d - 1, m, j) = 0.5 * (-su.A[j] + su.B[j] - su.R[j]) + 0.5 * k * (sd.A[j] + sd.B[j] - sd.R[j]);
      // d/dz A = phi - k A, d/dz B = -phi + k B, d/dz R = -k R
      const cd dA_u = u[j] - k * su.A[j], dB_u = -u[j] + k * su.B[j], dR_u = -k * su.R[j];
      const cd dA_d = fd[j] - k * sd.A[j], dB_d = -fd[j] + k * sd.B[j], dR_d = -k * sd.R[j];
      o.dnormal.at(0, m, j) = 0.5 * (-dA_u + dB_u - dR_u) + 0.5 * k * (dA_d + dB_d - dR_d);
    }
  });
  return finish(o);
}

GridField project(const GridField& f) { return project_with_diagnostics(f).field; }

ProjectionResult project_div_with_diagnostics(const TensorField& T) {
  if (!T.admissible()) {
    std::ostringstream os;
    os << "tensor violates the wall conditions: F_ad " << T.trace_tangential_normal << ", F_dg "
       << T.trace_normal_row << ", d F_dd " << T.trace_normal_flux;
    fail(ErrorCode::invalid_argument, os.str());
  }
  const GridField& F = T.F;
  const auto& g = *F.grid;
  const int d = g.dimension;
  const std::size_t nv = g.n_vertical();
  const SpectralField Fs = to_spectral(F);
  const VerticalBasis& b = *g.basis;
  ModeOut o{SpectralField(F.grid, d), SpectralField(F.grid, 1)};
  auto idx = [d](int a, int c) { return a * d + c; };
  const WideDerivative D(g.vertical_nodes);
  parallel_for(g.n_points(), [&](std::size_t m) {
    if (g.is_nyquist(m)) return;
    const auto xi = g.xi(m);
    const double k = std::hypot(xi[0], xi[1]);
    // local vertical derivatives of the normal row; the wide stencil keeps the nodal
    // output consistent with a smooth divergence-free field to high order
    std::vector<std::vector<cd>> dF(d, std::vector<cd>(nv));
    for (int c = 0; c < d; ++c) D.apply(Fs.profile(idx(d - 1, c), m), dF[c].data());
    if (k == 0) {
      for (int c = 0; c < d - 1; ++c) std::copy(dF[c].begin(), dF[c].end(), o.val.profile(c, m));
      return;
    }
    std::vector<cd> Q(nv, 0.0), V(nv, 0.0), Fdd = profile_copy(Fs, idx(d - 1, d - 1), m), Wq(nv);
    for (std::size_t j = 0; j < nv; ++j) {
      for (int a = 0; a < d - 1; ++a) {
        for (int c = 0; c < d - 1; ++c) Q[j] += xi[a] * xi[c] * Fs.at(idx(a, c), m, j);
        V[j] += cd(0, xi[a]) * (Fs.at(idx(d - 1, a), m, j) + Fs.at(idx(a, d - 1), m, j));
      }
      Wq[j] = Q[j] - k * k * Fdd[j];
    }
    const ExpCellWeights W = exp_cell_weights(b, cd(k));
    const Sweeps sQ = sweep(b, W, Q), sF = sweep(b, W, Fdd), sV = sweep(b, W, V), sW = sweep(b, W, Wq);
    for (std::size_t j = 0; j < nv; ++j) {
      const cd evenQ = sQ.A[j] + sQ.B[j] + sQ.R[j];
      const cd evenF = sF.A[j] + sF.B[j] + sF.R[j];
      const cd mixV = -sV.A[j] + sV.B[j] + sV.R[j];
      for (int be = 0; be < d - 1; ++be) {
        cd local = dF[be][j] - cd(0, xi[be]) * Fdd[j];
        for (int a = 0; a < d - 1; ++a) local += cd(0, xi[a]) * Fs.at(idx(a, be), m, j);
        const cd ib = cd(0, xi[be]);
        o.val.at(be, m, j) = local - ib * evenQ / (2 * k) + ib * k * evenF / 2.0 + ib * mixV / 2.0;
      }
      cd local = 0;
      for (int c = 0; c < d - 1; ++c) local -= cd(0, xi[c]) * Fs.at(idx(d - 1, c), m, j);
      o.val.at(d - 1, m, j) =
          local + 0.5 * (sW.A[j] - sW.B[j] + sW.R[j]) + 0.5 * k * (sV.A[j] + sV.B[j] - sV.R[j]);
      // analytic vertical derivative of the normal component; the local term reuses the
      // stencil derivative of F_{dc}
      cd dlocal = 0;
      for (int c = 0; c < d - 1; ++c) dlocal -= cd(0, xi[c]) * dF[c][j];
      const cd dAW = Wq[j] - k * sW.A[j], dBW = -Wq[j] + k * sW.B[j], dRW = -k * sW.R[j];
      const cd dAV = V[j] - k * sV.A[j], dBV = -V[j] + k * sV.B[j], dRV = -k * sV.R[j];
      o.dnormal.at(0, m, j) = dlocal + 0.5 * (dAW - dBW + dRW) + 0.5 * k * (dAV + dBV - dRV);
    }
  });
  return finish(o);
}

GridField project_div(const TensorField& F) { return project_div_with_diagnostics(F).field; }

double symbol_split_identity(double theta, cd lambda, const std::vector<std::array<double, 2>>& xis,
                             const std::vector<double>& ts, int symbol) {
  require(theta >= 0 && theta <= 2, "theta must lie in [0, 2]");
  require(std::abs(lambda) > 0, "lambda must be nonzero");
  require(symbol >= 0 && symbol <= 2, "symbol selector must be 0, 1 or 2");
  const double scale = 1.0 / std::sqrt(std::abs(lambda));
  double worst = 0;
  for (const auto& xi : xis) {
    const double k = std::hypot(xi[0], xi[1]);
    if (k == 0) continue;
    const double m2 = symbol == 0 ? xi[0] * xi[0] : symbol == 1 ? xi[0] * (xi[1] != 0 ? xi[1] : xi[0]) : k * k;
    const double chi = cutoff_chi(scale * k);
    for (double t : ts) {
      const double e = std::exp(-t * k);
      const double lhs = m2 * e;
      const double high = std::pow(k, 2 - theta) * (1 - chi) * m2 * std::pow(k, theta - 2) * e;
      const double low = chi * m2 * e;
      if (lhs == 0) continue;
      worst = std::max(worst, std::abs(lhs - (high + low)) / std::abs(lhs));
    }
  }
  return worst;
}

}  // namespace hs
