// SPDX-License-Identifier: Apache-2.0
// End-to-end acceptance checks: one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hs_stokes/estimates.hpp"
#include "hs_stokes/fields.hpp"
#include "hs_stokes/hs_stokes.h"
#include "hs_stokes/kernels.hpp"
#include "hs_stokes/leray.hpp"
#include "hs_stokes/mild_ns.hpp"
#include "hs_stokes/resolvent.hpp"
#include "hs_stokes/semigroup.hpp"
#include "hs_stokes/verify.hpp"

#ifndef HS_CONFIG_DIR
#define HS_CONFIG_DIR "configs"
#endif

using namespace hs;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void need(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double gap(const GridField& a, const GridField& b) {
  const double n = b.max_abs();
  return n > 0 ? (a - b).max_abs() / n : a.max_abs();
}

std::string config_dir = HS_CONFIG_DIR;

// ---------------------------------------------------------------- 1

void kernel_oracles(Outcome& o) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-2, 2);
  double worst = 0;
  for (int d : {3, 2})
    for (int i = 0; i < 20; ++i) {
      KernelQuery q;
      q.id = KernelId::k1;
      q.dimension = d;
      q.lambda = SectorPoint(1, 0, kPi / 8);
      q.y_prime = {u(rng), d == 3 ? u(rng) : 0.0};
      q.y_d = u(rng);
      const double r = std::sqrt(q.y_prime[0] * q.y_prime[0] + q.y_prime[1] * q.y_prime[1] + q.y_d * q.y_d);
      const double ref = d == 3 ? std::exp(-r) / (4 * kPi * r) : std::cyl_bessel_k(0.0, r) / (2 * kPi);
      worst = std::max(worst, std::abs(eval_kernel(q).value[0] - ref) / ref);
    }
  const double dt = seconds_since(t0);
  o.detail << "max rel err " << worst << " over 40 points, " << dt << " s";
  o.need(worst <= 1e-8, "rel err <= 1e-8");
  o.need(dt < 60, "runtime < 1 min");
}

// ---------------------------------------------------------------- 2

void scaling_identities(Outcome& o) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> yp(-1.5, 1.5), yv(0.05, 2.0);
  const std::vector<SectorPoint> lambdas{SectorPoint(4, 0, kPi / 8), SectorPoint(9, 0, kPi / 8),
                                         SectorPoint(2, kPi / 3, kPi / 8)};
  for (int d : {2, 3}) {
    const auto t0 = Clock::now();
    double worst = 0;
    int n = 0;
    bool converged = true;
    for (KernelId id : {KernelId::k1, KernelId::k2, KernelId::r_prime, KernelId::r_d, KernelId::q})
      for (const auto& lam : lambdas)
        for (int dv = 0; dv < 4; ++dv)
          for (int i = 0; i < 4; ++i) {
            KernelQuery q;
            q.id = id;
            q.dimension = d;
            q.lambda = lam;
            q.y_prime = {yp(rng), d == 3 ? yp(rng) : 0.0};
            q.y_d = yv(rng);
            q.z_d = id == KernelId::k1 ? 0.0 : yv(rng);
            if (dv == 1) q.deriv.tangential = {1, 0};
            if (dv == 2) q.deriv.yd = 1;
            if (dv == 3) {
              if (id == KernelId::k1) q.deriv.yd = 2;
              else q.deriv.zd = 1;
            }
            const ScalingCheck s = scaling_gap(q);
            converged = converged && s.converged;
            worst = std::max(worst, s.gap);
            ++n;
          }
    const double dt = seconds_since(t0);
    o.detail << "d=" << d << ": max gap " << worst << " over " << n << " checks, " << dt << " s; ";
    o.need(converged, "quadrature converged");
    o.need(worst <= 1e-8, "gap <= 1e-8");
    o.need(dt < (d == 2 ? 300 : 1800), "runtime limit");
  }
}

// ---------------------------------------------------------------- 3

void kernel_envelopes(Outcome& o) {
  for (int d : {2, 3}) {
    const auto t0 = Clock::now();
    SamplePlan plan;
    plan.dimension = d;
    plan.n_samples = 1000;
    plan.lambda_min = 1e-2;
    plan.lambda_max = 1e2;
    int pairs = 0, passed = 0;
    double worst_stab = 0;
    std::size_t min_samples = std::numeric_limits<std::size_t>::max();
    for (KernelId id : {KernelId::k1, KernelId::k2, KernelId::r_prime, KernelId::r_d, KernelId::q})
      for (int t = 0; t <= 3; ++t)
        for (int a = 0; a <= 3; ++a)
          for (int b = 0; b <= 2; ++b) {
            KernelDeriv dv;
            dv.tangential = {t, 0};
            dv.yd = a;
            dv.zd = b;
            if (!has_bound(id, dv)) continue;
            const EstimateReport r = check_bound_ratio(id, t, a, b, plan);
            ++pairs;
            worst_stab = std::max(worst_stab, r.stability_ratio);
            min_samples = std::min(min_samples, r.samples - r.excluded_points.size());
            if (r.verdict == Verdict::pass) ++passed;
            else o.detail << "(" << r.estimate_id << " C=" << r.fitted_constant << " stab=" << r.stability_ratio << ") ";
          }
    o.detail << "d=" << d << ": " << passed << "/" << pairs << " pairs, max stability " << worst_stab
             << ", min samples " << min_samples << ", " << seconds_since(t0) << " s; ";
    o.need(pairs == 48, "48 bounded kernel derivatives");
    o.need(passed == pairs, "every pair finite and stable");
    o.need(min_samples >= 1000, ">= 1e3 samples");
  }
}

// ---------------------------------------------------------------- 4

void resolvent_solver(Outcome& o) {
  const SectorPoint lam(1.5, 0.7, kPi / 8);
  double min_order = 1e9;
  for (int d : {2, 3}) {
    std::vector<double> err;
    for (int n : {400, 800, 1600}) {
      if (d == 3 && n == 1600) continue;
      auto g = make_grid(d, 2 * kPi, 8, 20.0, n, 1.0);
      const auto mp = manufactured_pair(g, lam.value(), 0.5, 2);
      err.push_back(gap(solve_resolvent(lam, mp.f).u, mp.u));
    }
    for (std::size_t i = 0; i + 1 < err.size(); ++i) min_order = std::min(min_order, std::log2(err[i] / err[i + 1]));
  }
  o.detail << "min order " << min_order;
  o.need(min_order >= 2, "order >= 2");

  auto g = make_grid(2, 2 * kPi, 8, 20.0, 800, 1.004);
  const auto mp = manufactured_pair(g, lam.value(), 0.5, 2);
  const auto s = solve_resolvent(lam, mp.f);
  const double res = std::max({s.diagnostics.pde_residual, s.diagnostics.div_residual, s.diagnostics.bc_residual});
  o.detail << ", finest residual " << res;
  o.need(res <= 1e-8, "residuals <= 1e-8");

  auto gi = make_grid(2, 2 * kPi, 16, 30.0, 400, 1.01);
  FieldSpec fs;
  fs.name = "random_solenoidal";
  fs.params = {{"seed", {7}}, {"modes", {3}}, {"ell", {1.0}}};
  const GridField f = sample_field(gi, fs);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> arg(-2.5, 2.5), lm(-1, 1);
  double ident = 0;
  ResolventOptions opt;
  opt.check_input = false;
  opt.diagnostics = false;
  for (int trial = 0; trial < 6; ++trial) {
    const SectorPoint l(std::pow(10.0, lm(rng)), arg(rng), kPi / 8), m(std::pow(10.0, lm(rng)), arg(rng), kPi / 8);
    const GridField rl = solve_resolvent(l, f, opt).u, rm = solve_resolvent(m, f, opt).u;
    const GridField rlm = solve_resolvent(l, rm, opt).u;
    ident = std::max(ident, (rl - rm + (l.value() - m.value()) * rlm).max_abs() / rl.max_abs());
  }
  o.detail << ", resolvent identity " << ident;
  o.need(ident <= 1e-7, "identity <= 1e-7");

  auto gd = make_grid(2, 2 * kPi, 16, 16.0, 320, 1.0);
  FieldSpec bump;
  bump.name = "div_free_bump";
  bump.params = {{"width", {0.7}}};
  ResolventOptions dopt;
  dopt.decay_radii = {1, 2, 3, 4, 6, 8};
  const auto sd = solve_resolvent(SectorPoint(1.0, 0.3, kPi / 8), sample_field(gd, bump), dopt);
  const double slope = loglog_slope(sd.diagnostics.pressure_decay_profile);
  o.detail << ", pressure decay slope " << slope;
  o.need(slope <= -0.7, "slope <= -0.7");
}

// ---------------------------------------------------------------- estimate sweeps

GridPtr sweep_grid() { return make_grid(2, 8.0, 16, 16.0, 200, 1.02); }

EstimateSweep base_sweep() {
  EstimateSweep s;
  s.n_points = 9;
  s.trials = 4;
  s.exponents = {{2, 2}, {2, kInfExponent}, {1, 2}};
  s.contour.n_nodes = 8;
  s.seed = 1;
  return s;
}

void summarize(Outcome& o, const std::vector<EstimateReport>& reps, const std::string& label) {
  int passed = 0;
  double stab = 0, shape = 0;
  for (const auto& r : reps) {
    stab = std::max(stab, r.stability_ratio);
    shape = std::max(shape, r.shape_residual);
    if (r.verdict == Verdict::pass) ++passed;
    else o.detail << "(" << r.estimate_id << " stab=" << r.stability_ratio << " shape=" << r.shape_residual << ") ";
  }
  o.detail << label << ": " << passed << "/" << reps.size() << " pass, max stability " << stab << ", max shape residual "
           << shape << "; ";
  o.need(passed == static_cast<int>(reps.size()) && !reps.empty(), label + " all pass");
}

// ---------------------------------------------------------------- 5

void resolvent_shapes(Outcome& o) {
  auto g = sweep_grid();
  EstimateSweep s = base_sweep();
  s.angles = {0.0, kPi / 2, 3 * kPi / 4};
  summarize(o, fit_resolvent_estimates(g, s), "resolvent");
  s.trials = 16;
  summarize(o, fit_bilinear_resolvent_estimates(g, s), "bilinear resolvent");
}

// ---------------------------------------------------------------- 6

void semigroup_checks(Outcome& o) {
  auto gh = make_grid(2, 2 * kPi, 16, 40.0, 400, 1.01);
  FieldSpec fs;
  fs.name = "gaussian_bump";
  fs.params = {{"center", {kPi, 2.0}}, {"width", {0.6}}};
  const GridField f = sample_field(gh, fs);
  double heat = 0;
  for (double t : {0.1, 0.3, 1.0, 3.0, 10.0}) {
    const auto c = build_contour(t, 3 * kPi / 4, 0.5, 16, 1e-10);
    heat = std::max(heat, gap(dirichlet_heat_by_contour(f, c), heat_reflection_oracle(t, f)));
  }
  o.detail << "heat oracle " << heat;
  o.need(heat <= 1e-6, "heat oracle <= 1e-6");

  auto g = make_grid(2, 2 * kPi, 16, 24.0, 300, 1.01);
  FieldSpec rs;
  rs.name = "random_solenoidal";
  rs.params = {{"seed", {5}}, {"modes", {2}}, {"ell", {1.0}}};
  const GridField v = sample_field(g, rs);
  double comp = 0, indep = 0;
  for (auto [s, t] : {std::pair{0.3, 0.5}, std::pair{1.0, 2.0}}) {
    const GridField direct = apply_semigroup(s + t, v, build_contour(s + t, 3 * kPi / 4, 0.5, 16, 1e-10));
    const GridField composed = apply_semigroup(s, apply_semigroup(t, v, build_contour(t, 3 * kPi / 4, 0.5, 16, 1e-10)),
                                               build_contour(s, 3 * kPi / 4, 0.5, 16, 1e-10));
    comp = std::max(comp, gap(composed, direct));
    indep = std::max(indep, gap(apply_semigroup(s + t, v, build_contour(s + t, 2 * kPi / 3, 0.3, 16, 1e-10)), direct));
  }
  o.detail << ", composition " << comp << ", contour independence " << indep << "; ";
  o.need(comp <= 1e-6, "composition <= 1e-6");
  o.need(indep <= 1e-6, "contour independence <= 1e-6");

  EstimateSweep s = base_sweep();
  s.min = 1e-2;
  s.max = 1e1;
  summarize(o, fit_semigroup_estimates(sweep_grid(), s), "semigroup shapes");
}

// ---------------------------------------------------------------- 7

GridField gradient_field(GridPtr g) {
  const int d = g->dimension;
  GridField f(g, d);
  for (std::size_t m = 0; m < g->n_points(); ++m) {
    const auto p = g->point(m);
    const double a = std::exp(1.5 * (std::cos(p[0] - 1) - 1)), da = -1.5 * std::sin(p[0] - 1) * a;
    const double c = d == 3 ? std::exp(std::cos(p[1] + 0.5) - 1) : 1.0;
    const double dc = d == 3 ? -std::sin(p[1] + 0.5) * c : 0.0;
    for (std::size_t k = 0; k < g->n_vertical(); ++k) {
      const double z = g->vertical_nodes[k];
      const double G = std::exp(-(z - 3) * (z - 3)), dG = -2 * (z - 3) * G;
      f.at(0, m, k) = da * c * G;
      if (d == 3) f.at(1, m, k) = a * dc * G;
      f.at(d - 1, m, k) = a * c * dG;
    }
  }
  return f;
}

void projector(Outcome& o) {
  double annihilate = 0, fixed = 0, idem = 0, composition = 0;
  for (int d : {2, 3}) {
    auto g = d == 2 ? make_grid(2, 2 * kPi, 32, 24.0, 1000, 1.003) : make_grid(3, 2 * kPi, 24, 24.0, 1000, 1.003);
    const GridField grad = gradient_field(g);
    annihilate = std::max(annihilate, project(grad).max_abs() / grad.max_abs());
    FieldSpec rs;
    rs.name = "random_solenoidal";
    rs.params = {{"seed", {1}}, {"modes", {2}}, {"ell", {0.8}}};
    const GridField sol = sample_field(g, rs);
    fixed = std::max(fixed, gap(project(sol), sol));
    FieldSpec bump;
    bump.name = "gaussian_bump";
    bump.params = {{"components", {double(d)}}, {"width", {1.2}}};
    const GridField generic = sol + grad + cd(0.3) * sample_field(g, bump);
    const GridField p1 = project(generic);
    idem = std::max(idem, gap(project(p1), p1));
    FieldSpec df;
    df.name = "div_free_bump";
    df.params = {{"width", {1.5}}, {"kappa", {1.0}}, {"center", d == 2 ? std::vector<double>{2.0, 2.5}
                                                                        : std::vector<double>{2.0, 3.0, 2.5}}};
    rs.params["seed"] = {6};
    const TensorField F = tensor_product(sample_field(g, df), sample_field(g, rs));
    composition = std::max(composition, gap(project_div(F), project(tensor_divergence(F.F))));
  }
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-40, 40), ts(0, 5);
  std::vector<std::array<double, 2>> xis;
  for (int i = 0; i < 400; ++i) xis.push_back({u(rng), u(rng)});
  for (int i = 0; i <= 50; ++i) xis.push_back({2.0 * (2.0 + i / 50.0), 0.0});
  std::vector<double> tv;
  for (int i = 0; i < 20; ++i) tv.push_back(ts(rng));
  double split = 0;
  for (double theta : {0.0, 0.5, 1.0, 2.0})
    for (int sym : {0, 1, 2}) {
      split = std::max(split, symbol_split_identity(theta, cd(4.0, 0.0), xis, tv, sym));
      split = std::max(split, symbol_split_identity(theta, std::polar(3.0, 2.0), xis, tv, sym));
    }
  o.detail << "gradient " << annihilate << ", fixed point " << fixed << ", idempotence " << idem << ", project_div "
           << composition << ", symbol split " << split;
  o.need(annihilate <= 1e-8 && fixed <= 1e-8 && idem <= 1e-8, "projector identities <= 1e-8");
  o.need(composition <= 1e-7, "project_div composition <= 1e-7");
  o.need(split <= 1e-14, "symbol split <= 1e-14");
}

// ---------------------------------------------------------------- 8

void bilinear_shapes(Outcome& o) {
  EstimateSweep s = base_sweep();
  s.min = 1e-2;
  s.max = 1e1;
  s.trials = 16;
  const auto reps = fit_bilinear_estimates(sweep_grid(), s);
  bool has_q1 = false;
  for (const auto& r : reps) has_q1 = has_q1 || r.estimate_id.find("q=1") != std::string::npos;
  summarize(o, reps, "bilinear");
  o.need(has_q1, "q=1 included");
}

// ---------------------------------------------------------------- 9

void mild_ns(Outcome& o) {
  const SolverConfig cfg = load_config(config_dir + "/ns_mild.json");
  auto g = grid_from_config(cfg);
  PicardOptions opt;
  opt.horizon = cfg.ns.horizon;
  opt.time_steps = cfg.ns.time_steps;
  opt.q = cfg.ns.q;
  opt.rho = cfg.ns.rho;
  opt.tol = cfg.tolerances.fixed_point;
  opt.max_sweeps = cfg.ns.max_sweeps;
  opt.contour = cfg.contour;
  opt.quadrature_tol = cfg.tolerances.quadrature;
  const int d = cfg.dimension;
  const double threshold = cfg.ns.gamma / horizon_shape(opt.horizon, opt.q, d);
  const auto worst = static_cast<std::uint64_t>(cfg.field.get("seed", 100));
  o.detail << "gamma " << cfg.ns.gamma << ", threshold " << threshold << ", factors at half threshold:";
  double factor = 0;
  bool converged = true, ball = true;
  for (std::uint64_t seed : {worst, std::uint64_t(100), std::uint64_t(101), std::uint64_t(102)}) {
    const Trajectory tr = picard_solve(cd(0.5 * threshold) * calibration_direction(g, opt.q, seed), opt);
    o.detail << " " << tr.contraction_factor();
    factor = std::max(factor, tr.contraction_factor());
    converged = converged && tr.verdict == PicardVerdict::converged;
    ball = ball && tr.kato_norm() <= 2 * tr.linear_kato_norm;
  }
  o.need(cfg.ns.gamma > 0, "frozen gamma");
  o.need(converged, "converged");
  o.need(factor <= 0.5, "factor <= 0.5");
  o.need(ball, "Kato norm within the ball");

  const double rho = 2.0;
  auto g1 = make_grid(2, 8.0, 8, 16.0, 120, 1.03), g2 = make_grid(2, 8.0 / rho, 8, 16.0 / rho, 120, 1.03);
  PicardOptions o1;
  o1.time_steps = 4;
  o1.contour.n_nodes = 8;
  o1.tol = 0;
  o1.max_sweeps = 24;
  PicardOptions o2 = o1;
  o2.horizon = o1.horizon / (rho * rho);
  const GridField u0 = cd(4.0) * calibration_direction(g1, o1.q, 7);
  GridField v0(g2, 2);
  v0.values = u0.values;
  v0 = cd(rho) * v0;
  const Trajectory a = picard_solve(u0, o1), b = picard_solve(v0, o2);
  double cov = 0;
  for (std::size_t j = 0; j < a.states.size(); ++j) {
    GridField ref(g2, 2);
    ref.values = a.states[j].values;
    cov = std::max(cov, gap(b.states[j], cd(rho) * ref));
  }
  o.detail << "; scaling covariance " << cov;
  o.need(cov <= 1e-5, "covariance <= 1e-5");

  bool monotone = true;
  double quad = 0;
  for (int dd : {2, 3})
    for (double q : {double(dd), dd + 1.0, 8.0}) {
      double prev = std::numeric_limits<double>::infinity();
      for (double n : {1e-3, 1e-2, 0.1, 0.5, 1.0, 2.0, 2.9}) {
        const double T = existence_horizon(n, q, dd, 3.0);
        monotone = monotone && T < prev;
        prev = T;
      }
      const double e = dd / q - 1;
      for (double c : {0.25, 0.5, 1.0}) {
        const double T1 = existence_horizon_scaled(c * 3.0, 1.0, q, dd, 3.0);
        for (double r : {2.0, 4.0, 8.0})
          quad = std::max(quad, std::abs(existence_horizon_scaled(c * 3.0 * std::pow(r, e), r, q, dd, 3.0) - r * r * T1) /
                                    (r * r * T1));
      }
    }
  o.detail << "; horizon monotone " << (monotone ? "yes" : "no") << ", quadratic gap " << quad;
  o.need(monotone, "horizon monotone");
  o.need(quad <= 1e-12, "horizon scales as rho^2");
}

// ---------------------------------------------------------------- 10

void liouville(Outcome& o) {
  double steady = 0, unsteady = 0;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> lm(-2, 2), ang(-0.85 * kPi, 0.85 * kPi), dd(-2, 2);
  for (int d : {2, 3}) {
    auto g = make_grid(d, 2 * kPi, 4, 12.0, 60, 1.05);
    for (int i = 0; i < 20; ++i)
      steady = std::max(steady, parasitic_residual(SectorPoint(std::pow(10.0, lm(rng)), ang(rng), kPi / 8),
                                                   {dd(rng), dd(rng)}, g)
                                    .max());
    TimeProfile constant, wave, mixed;
    wave.frequency = 1.0;
    mixed.amplitude = {0.5, -1.0};
    mixed.frequency = 2.0;
    mixed.phase = 0.3;
    for (const auto& D : {constant, wave, mixed})
      unsteady = std::max(unsteady, nonsteady_parasitic_residual(D, g, {0.05, 0.3, 1.0, 2.5, 5.0}).max());
  }
  auto g = make_grid(2, 2 * kPi, 16, 16.0, 320, 1.0);
  FieldSpec bump;
  bump.name = "div_free_bump";
  bump.params = {{"width", {0.7}}};
  const auto sol = solve_resolvent(SectorPoint(1.0, 0.3, kPi / 8), sample_field(g, bump));
  const std::vector<double> radii{1, 2, 3, 4, 6, 8};
  const LiouvilleCheck clean = liouville_pressure_check(sol, radii);
  const LiouvilleCheck injected = liouville_pressure_check(sol, radii, {0.1, 0.0});
  o.detail << "steady " << steady << ", nonsteady " << unsteady << ", clean slope " << clean.slope
           << ", injected slope " << injected.slope;
  o.need(steady <= 1e-8 && unsteady <= 1e-8, "parasitic residuals <= 1e-8");
  o.need(!clean.non_decaying, "decaying pressure passes");
  o.need(injected.non_decaying, "injected pressure flagged");
}

// ---------------------------------------------------------------- 11

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void determinism(Outcome& o) {
  hs_config* cfg = nullptr;
  if (hs_config_load((config_dir + "/smoke.json").c_str(), &cfg) != HS_OK) {
    o.need(false, std::string("smoke config: ") + hs_last_error());
    return;
  }
  const fs::path root = fs::temp_directory_path() / "hs_stokes_determinism";
  fs::remove_all(root);
  int files = 0;
  bool identical = true;
  for (const char* cmd : {"verify-liouville", "ns-mild", "verify-estimates", "semigroup", "resolvent", "verify-kernels"}) {
    std::vector<std::vector<std::string>> outputs;
    for (int rep = 0; rep < 2; ++rep) {
      hs_set_threads(rep == 0 ? 1 : 3);
      hs_run* run = nullptr;
      const fs::path dir = root / (std::string(cmd) + "_" + std::to_string(rep));
      const hs_status st = hs_run_command(cmd, cfg, dir.c_str(), 11, &run);
      if (st == HS_ERR_CONFIG || st == HS_ERR_NUMERICAL) o.need(false, std::string(cmd) + ": " + hs_run_message(run));
      std::vector<std::string> names;
      for (size_t i = 0; i < hs_run_output_count(run); ++i) names.emplace_back(hs_run_output(run, i));
      outputs.push_back(names);
      hs_run_free(run);
    }
    identical = identical && outputs[0] == outputs[1];
    for (const auto& name : outputs[0]) {
      ++files;
      if (slurp(root / (std::string(cmd) + "_0") / name) != slurp(root / (std::string(cmd) + "_1") / name)) {
        identical = false;
        o.detail << "(differs: " << cmd << "/" << name << ") ";
      }
    }
  }
  hs_set_threads(0);
  hs_config_free(cfg);
  fs::remove_all(root);
  o.detail << files << " output files compared across two runs (1 and 3 threads)";
  o.need(files > 0 && identical, "byte-identical outputs");
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--configs" && i + 1 < argc) {
      config_dir = argv[++i];
    } else if (a == "--only" && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      for (std::string tok; std::getline(ss, tok, ',');) only.insert(std::stoi(tok));
    } else {
      std::fprintf(stderr, "usage: %s [--only N,M] [--configs DIR]\n", argv[0]);
      return 2;
    }
  }
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"kernel oracles", kernel_oracles},       {"kernel scaling identities", scaling_identities},
      {"kernel envelopes", kernel_envelopes},   {"resolvent solver", resolvent_solver},
      {"resolvent estimate shapes", resolvent_shapes}, {"semigroup", semigroup_checks},
      {"projector", projector},                 {"bilinear estimate shapes", bilinear_shapes},
      {"mild Navier-Stokes", mild_ns},          {"Liouville suite", liouville},
      {"determinism", determinism}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    Outcome o;
    const auto t0 = Clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.need(false, std::string("exception: ") + e.what());
    }
    std::printf("criterion %2d %s  %s: %s (%.1f s)\n", id, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.str().c_str(), seconds_since(t0));
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
