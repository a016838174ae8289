// SPDX-License-Identifier: Apache-2.0
#include "hs_stokes/mild_ns.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hs_stokes/fields.hpp"
#include "hs_stokes/leray.hpp"
#include "hs_stokes/quadrature.hpp"

namespace hs {

GridField bilinear_term(const GridField& u, const GridField& v, const ContourQuadrature& c) {
  const GridField g = project_div(tensor_product(u, v));
  SemigroupRequest req;
  req.check_input = false;
  return apply_semigroup(g, c, req).u;
}

GridField bilinear_term(double t, const GridField& u, const GridField& v, const ContourQuadrature& c) {
  require(t > 0, "bilinear term needs t > 0");
  require(std::abs(t - c.t) <= 1e-14 * std::max(1.0, t), "contour was built for a different time");
  return bilinear_term(u, v, c);
}

const char* picard_verdict_name(PicardVerdict v) {
  switch (v) {
    case PicardVerdict::converged: return "CONVERGED";
    case PicardVerdict::diverged: return "DIVERGED";
    default: return "NOT_CONVERGED";
  }
}

std::vector<KatoTerms> Trajectory::norms() const {
  std::vector<KatoTerms> out;
  for (std::size_t j = 0; j < times.size(); ++j) out.push_back(kato_terms(times[j], states[j], q, rho));
  return out;
}

double Trajectory::kato_norm() const {
  double best = 0;
  for (const auto& k : norms()) best = std::max(best, k.total());
  return best;
}

double Trajectory::contraction_factor() const {
  // Gap ratios alternate between sweeps, so the rate is read over two sweeps.
  const double floor = 1e-13 * std::max(1.0, linear_kato_norm);
  const auto& g = contraction_history;
  if (g.size() == 2) return g[0] > floor && g[1] > floor ? g[1] / g[0] : 0.0;
  double best = 0;
  for (std::size_t k = 2; k < g.size(); ++k) {
    if (g[k - 2] <= floor || g[k] <= floor) break;
    best = std::max(best, std::sqrt(g[k] / g[k - 2]));
  }
  return best;
}

namespace {

void axpy(SpectralField& y, cd a, const SpectralField& x) {
  for (std::size_t i = 0; i < y.modal_values.size(); ++i) y.modal_values[i] += a * x.modal_values[i];
}

double gap_norm(const std::vector<double>& times, const std::vector<GridField>& a, const std::vector<GridField>& b,
                double q, double rho) {
  double best = 0;
  for (std::size_t j = 0; j < times.size(); ++j)
    best = std::max(best, kato_terms(times[j], a[j] - b[j], q, rho).total());
  return best;
}

// Exact integrals of e^{(t - s) lambda} against the hat functions of the mesh s_0..s_j, t = s_j.
// Terms without an exponential factor are analytic to the right of the contour and decay like
// |lambda|^{-2} after the resolvent, so their contour integral vanishes; they are dropped.
std::vector<cd> duhamel_weights(const std::vector<double>& s, std::size_t j, cd lam) {
  std::vector<cd> w(j + 1, 0.0);
  const double t = s[j];
  for (std::size_t i = 1; i <= j; ++i) {
    const double delta = s[i] - s[i - 1];
    const cd ea = std::exp((t - s[i - 1]) * lam);
    const cd eb = i == j ? cd(0) : std::exp((t - s[i]) * lam);
    const cd i0 = (ea - eb) / lam;
    const cd i1 = ((ea - eb) / (lam * lam) - delta * eb / lam) / delta;
    w[i] += i1;
    w[i - 1] += i0 - i1;
  }
  return w;
}

struct LevelPlan {
  ContourQuadrature linear;
  ContourQuadrature window;
};

}  // namespace

Trajectory picard_solve(const GridField& u0, const PicardOptions& opt) {
  require(opt.horizon > 0 && opt.time_steps >= 1 && opt.max_sweeps >= 1, "invalid Picard options");
  require(u0.components == u0.grid->dimension, "initial data must be a d-vector field");
  const int n = opt.time_steps;
  std::vector<double> s(n + 1);
  for (int j = 0; j <= n; ++j) s[j] = opt.horizon * (double(j) / n) * (double(j) / n);

  Trajectory tr;
  tr.q = opt.q;
  tr.rho = opt.rho;
  tr.times.assign(s.begin() + 1, s.end());
  tr.initial_norm = uloc_norm(u0, {opt.q, opt.rho});

  std::vector<LevelPlan> plans(n + 1);
  for (int j = 1; j <= n; ++j) {
    plans[j].linear = build_contour(s[j], opt.contour, opt.quadrature_tol);
    plans[j].window = build_contour_window(s[j] - s[j - 1], s[j], opt.contour, opt.quadrature_tol);
  }

  const SpectralField u0s = to_spectral(u0);
  std::vector<StokesModes> linear_modes(n + 1);
  std::vector<GridField> linear(n + 1);
  linear[0] = u0;
  for (int j = 1; j <= n; ++j) {
    linear_modes[j] = StokesModes(u0.grid);
    for (const auto& node : plans[j].linear.nodes) linear_modes[j].axpy(node.weight, solve_modes(node.lambda, u0s));
    linear[j] = imag_part(modes_velocity(linear_modes[j]));
  }
  std::vector<GridField> lin_states(linear.begin() + 1, linear.end());
  tr.linear_kato_norm = gap_norm(tr.times, lin_states, std::vector<GridField>(n, GridField(u0.grid, u0.components)),
                                 opt.q, opt.rho);

  std::vector<GridField> iterate = linear;
  const double u0_scale = u0.max_abs();
  for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
    std::vector<SpectralField> g(n + 1);
    for (int j = 0; j <= n; ++j) {
      if (u0_scale == 0) {
        g[j] = SpectralField(u0.grid, u0.components);
      } else {
        g[j] = to_spectral(project_div(tensor_product(iterate[j], iterate[j])));
      }
    }
    std::vector<GridField> next(n + 1);
    next[0] = u0;
    parallel_for(n, [&](std::size_t jj) {
      const std::size_t j = jj + 1;
      StokesModes sum = linear_modes[j];
      for (const auto& node : plans[j].window.nodes) {
        const std::vector<cd> w = duhamel_weights(s, j, node.lambda);
        SpectralField h(u0.grid, u0.components);
        for (std::size_t i = 0; i <= j; ++i) axpy(h, w[i], g[i]);
        sum.axpy(-node.dl, solve_modes(node.lambda, h));
      }
      next[j] = imag_part(modes_velocity(sum));
    });
    std::vector<GridField> a(next.begin() + 1, next.end()), b(iterate.begin() + 1, iterate.end());
    const double gap = gap_norm(tr.times, a, b, opt.q, opt.rho);
    tr.contraction_history.push_back(gap);
    iterate = std::move(next);
    if (!std::isfinite(gap)) {
      tr.verdict = PicardVerdict::diverged;
      break;
    }
    const std::size_t h = tr.contraction_history.size();
    if (h >= 3 && gap >= tr.contraction_history[h - 3] && gap > 1e-13 * std::max(1.0, tr.linear_kato_norm)) {
      tr.verdict = PicardVerdict::diverged;
      break;
    }
    const double size = std::max(gap_norm(tr.times, a, std::vector<GridField>(n, GridField(u0.grid, u0.components)),
                                          opt.q, opt.rho),
                                 std::numeric_limits<double>::min());
    if (gap <= opt.tol * size || gap == 0) {
      tr.verdict = PicardVerdict::converged;
      break;
    }
  }
  tr.states.assign(iterate.begin() + 1, iterate.end());
  for (const auto& u : tr.states) {
    const double m = u.max_abs();
    if (m == 0) continue;
    tr.max_divergence = std::max(tr.max_divergence, divergence_wide(u).max_abs() / gradient(u).max_abs());
    double wall = 0;
    for (int c = 0; c < u.components; ++c)
      for (std::size_t p = 0; p < u.grid->n_points(); ++p) wall = std::max(wall, std::abs(u.at(c, p, 0)));
    tr.max_boundary = std::max(tr.max_boundary, wall / m);
  }
  return tr;
}

double a_priori_contraction(double u0_norm, double T, double q, int d, double gamma) {
  require(gamma > 0, "gamma must be positive");
  return u0_norm * horizon_shape(T, q, d) / gamma;
}

double horizon_shape(double T, double q, int d) {
  const double e = d / (2 * q);
  return std::pow(T, 0.5 + e) + std::pow(T, 0.5 - e);
}

double existence_horizon(double u0_norm, double q, int d, double gamma) {
  require(q >= d, "existence horizon needs q >= d");
  require(gamma > 0 && u0_norm >= 0, "existence horizon needs gamma > 0 and a nonnegative norm");
  if (u0_norm == 0) return std::numeric_limits<double>::infinity();
  const double target = gamma / u0_norm;
  if (q == d) return std::max(0.0, target - 1.0);
  // the shape increases from 0 to infinity
  double lo = 0, hi = 1;
  while (horizon_shape(hi, q, d) < target) hi *= 2;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (horizon_shape(mid, q, d) <= target ? lo : hi) = mid;
  }
  return lo;
}

double existence_horizon_scaled(double u0_norm_rho, double rho, double q, int d, double gamma) {
  require(rho > 0, "rho must be positive");
  if (u0_norm_rho <= gamma * std::pow(rho, d / q - 1)) return rho * rho;
  const double unscaled = existence_horizon(std::pow(rho, 1 - d / q) * u0_norm_rho, q, d, gamma);
  return rho * rho * std::min(1.0, unscaled);
}

GridField calibration_direction(GridPtr g, double q, std::uint64_t seed) {
  FieldSpec fs;
  fs.name = "random_solenoidal";
  fs.params = {{"seed", {double(seed)}}, {"modes", {2}}, {"ell", {0.5}}};
  GridField f = sample_field(g, fs);
  return cd(1.0 / uloc_norm(f, {q, 1.0})) * f;
}

GammaCalibration calibrate_gamma(GridPtr g, const PicardOptions& opt_in, int directions, std::uint64_t seed) {
  require(directions >= 1, "calibration needs at least one direction");
  PicardOptions opt = opt_in;
  opt.tol = 0;
  GammaCalibration cal;
  cal.directions = directions;
  cal.horizon = opt.horizon;
  auto factor = [&](const GridField& dir, double a, int sweeps) {
    opt.max_sweeps = sweeps;
    const Trajectory t = picard_solve(cd(a) * dir, opt);
    if (t.verdict == PicardVerdict::diverged) return std::max(1.0, t.contraction_factor());
    return t.contraction_factor();
  };
  const int full = std::max(opt_in.max_sweeps, 4);
  std::vector<GridField> dirs;
  for (int i = 0; i < directions; ++i) dirs.push_back(calibration_direction(g, opt.q, seed + i));
  double a0 = 1.0;
  for (const auto& dir : dirs) {
    // short runs locate the linear regime of the factor
    double f0 = factor(dir, a0, 4);
    while (f0 > 0.3 || f0 == 0) {
      a0 *= f0 == 0 ? 4.0 : 0.5;
      f0 = factor(dir, a0, 4);
    }
    // full-budget runs walk down from the linear prediction
    double a1 = 0.97 * a0 / f0, f1 = factor(dir, a1, full);
    while (f1 >= 1) {
      a1 *= 0.97 / f1;
      f1 = factor(dir, a1, full);
    }
    for (int it = 0; it < 2 && f1 < 0.9; ++it) {
      const double a2 = a1 * 0.97 / f1, f2 = factor(dir, a2, full);
      if (f2 >= 1) break;
      a1 = a2;
      f1 = f2;
    }
    cal.direction_thresholds.push_back(a1);
  }
  cal.threshold_amplitude = *std::min_element(cal.direction_thresholds.begin(), cal.direction_thresholds.end());
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const double f = factor(dirs[i], cal.threshold_amplitude, full);
    cal.direction_factors.push_back(f);
    if (f < 1) ++cal.contracting;
  }
  cal.gamma = cal.threshold_amplitude * horizon_shape(opt.horizon, opt.q, g->dimension);
  return cal;
}

}  // namespace hs
