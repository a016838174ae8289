// SPDX-License-Identifier: Apache-2.0
#include "hs_stokes/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "hs_stokes/estimates.hpp"
#include "hs_stokes/fields.hpp"
#include "hs_stokes/kernels.hpp"
#include "hs_stokes/mild_ns.hpp"
#include "hs_stokes/resolvent.hpp"
#include "hs_stokes/semigroup.hpp"
#include "hs_stokes/uloc.hpp"
#include "hs_stokes/verify.hpp"
#include "json.hpp"

namespace hs {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

class Csv {
 public:
  Csv(const std::string& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) fail(ErrorCode::io, "cannot write '" + path + "'");
    row(header);
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }
  void values(const std::string& key, const std::vector<double>& v) {
    std::vector<std::string> cells{key};
    for (double x : v) cells.push_back(format_number(x));
    row(cells);
  }

 private:
  std::ofstream out_;
};

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string r = "\"";
  for (char c : s) r += c == '"' ? std::string("\"\"") : std::string(1, c);
  return r + "\"";
}

std::string file_safe(const std::string& id) {
  std::string r;
  for (char c : id) r += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-') ? c : '_';
  return r;
}

struct Context {
  fs::path dir;
  std::uint64_t seed = 1;
  RunResult* result = nullptr;

  std::string path(const std::string& name) {
    result->outputs.push_back(name);
    return (dir / name).string();
  }
  void verdict(const std::string& name, bool ok) {
    result->verdicts.push_back({name, ok ? Verdict::pass : Verdict::fail});
  }
  void reports(const std::vector<EstimateReport>& reps) {
    for (const auto& r : reps) result->verdicts.push_back({r.estimate_id, r.verdict});
  }
};

std::vector<double> log_lattice(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a * std::pow(b / a, n == 1 ? 0.0 : double(i) / (n - 1));
  return v;
}

std::vector<double> decay_radii(GridPtr g) {
  std::vector<double> r;
  for (double R : {1.0, 2.0, 3.0, 4.0, 6.0, 8.0})
    if (R + 1 <= g->height()) r.push_back(R);
  return r;
}

// ---------------------------------------------------------------- verify-kernels

void run_verify_kernels(const SolverConfig& cfg, Context& ctx) {
  const double eps = cfg.lambda.epsilon;
  std::mt19937_64 rng(ctx.seed);
  std::uniform_real_distribution<double> u(-2, 2);

  Csv oracle(ctx.path("kernel_oracle.csv"), {"dimension", "point", "y1", "y2", "y_d", "value", "reference", "rel_error"});
  double worst = 0;
  for (int d : {2, 3})
    for (int i = 0; i < 20; ++i) {
      KernelQuery q;
      q.id = KernelId::k1;
      q.dimension = d;
      q.lambda = SectorPoint(1.0, 0.0, eps);
      q.y_prime = {u(rng), d == 3 ? u(rng) : 0.0};
      q.y_d = u(rng);
      const double r = std::sqrt(q.y_prime[0] * q.y_prime[0] + q.y_prime[1] * q.y_prime[1] + q.y_d * q.y_d);
      const double ref = d == 3 ? std::exp(-r) / (4 * kPi * r) : std::cyl_bessel_k(0.0, r) / (2 * kPi);
      const double val = eval_kernel(q).value[0].real();
      const double err = std::abs(val - ref) / std::abs(ref);
      worst = std::max(worst, err);
      oracle.row({std::to_string(d), std::to_string(i), format_number(q.y_prime[0]), format_number(q.y_prime[1]),
                  format_number(q.y_d), format_number(val), format_number(ref), format_number(err)});
    }
  ctx.verdict("kernel_oracle", worst <= 1e-8);

  const int d = cfg.dimension;
  Csv scaling(ctx.path("kernel_scaling.csv"),
              {"kernel", "dimension", "lambda_re", "lambda_im", "derivative", "point", "gap"});
  std::uniform_real_distribution<double> yp(-1.5, 1.5), yv(0.1, 2.0);
  bool scaling_ok = true;
  const std::vector<SectorPoint> lambdas{SectorPoint(4, 0, eps), SectorPoint(9, 0, eps), SectorPoint(2, kPi / 3, eps)};
  for (KernelId id : {KernelId::k1, KernelId::k2, KernelId::r_prime, KernelId::r_d, KernelId::q})
    for (const auto& lam : lambdas)
      for (int dv = 0; dv < 3; ++dv)
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
          const ScalingCheck s = scaling_gap(q);
          scaling_ok = scaling_ok && s.converged && s.gap <= 1e-8;
          static const char* names[] = {"none", "tangential", "vertical"};
          scaling.row({kernel_name(id), std::to_string(d), format_number(lam.value().real()),
                       format_number(lam.value().imag()), names[dv], std::to_string(i), format_number(s.gap)});
        }
  ctx.verdict("kernel_scaling", scaling_ok);

  SamplePlan plan;
  plan.dimension = d;
  plan.n_samples = cfg.sweep.n_samples;
  plan.lambda_min = cfg.sweep.lambda_min;
  plan.lambda_max = cfg.sweep.lambda_max;
  plan.radius_min = cfg.sweep.radius_min;
  plan.radius_max = cfg.sweep.radius_max;
  plan.epsilon = eps;
  plan.seed = ctx.seed;
  std::vector<EstimateReport> reps;
  for (KernelId id : {KernelId::k1, KernelId::k2, KernelId::r_prime, KernelId::r_d, KernelId::q})
    for (int t = 0; t <= 3; ++t)
      for (int a = 0; a <= 3; ++a)
        for (int b = 0; b <= 2; ++b) {
          KernelDeriv dv;
          dv.tangential = {t, 0};
          dv.yd = a;
          dv.zd = b;
          if (has_bound(id, dv)) reps.push_back(check_bound_ratio(id, t, a, b, plan));
        }
  emit_constants(reps, ctx.path("kernel_bounds.csv"));
  emit_plot_data(reps, ctx.path("kernel_ratios.csv"));
  ctx.reports(reps);
}

// ---------------------------------------------------------------- resolvent

void run_resolvent(const SolverConfig& cfg, Context& ctx) {
  auto g = grid_from_config(cfg);
  const GridField f = sample_field(g, cfg.field);
  ResolventOptions opt;
  opt.decay_radii = decay_radii(g);
  const ResolventSolution sol = solve_resolvent(cfg.lambda, f, opt);
  const auto& dg = sol.diagnostics;
  const double slope = loglog_slope(dg.pressure_decay_profile);
  bool zero_profile = true;
  for (const auto& [R, v] : dg.pressure_decay_profile) zero_profile = zero_profile && v == 0;

  Csv diag(ctx.path("resolvent_diagnostics.csv"), {"metric", "value"});
  diag.values("tail_bound", {dg.tail_bound});
  diag.values("pde_residual", {dg.pde_residual});
  diag.values("div_residual", {dg.div_residual});
  diag.values("bc_residual", {dg.bc_residual});
  diag.values("input_divergence", {dg.input_divergence});
  diag.values("input_boundary", {dg.input_boundary});
  diag.values("max_velocity", {sol.u.max_abs()});
  diag.values("max_pressure_gradient", {sol.grad_p.max_abs()});
  diag.values("pressure_decay_slope", {zero_profile ? 0.0 : slope});
  Csv decay(ctx.path("pressure_decay.csv"), {"radius", "value"});
  for (const auto& [R, v] : dg.pressure_decay_profile) decay.row({format_number(R), format_number(v)});

  const double tol = cfg.tolerances.residual;
  ctx.verdict("pde_residual", dg.pde_residual <= tol);
  ctx.verdict("div_residual", dg.div_residual <= tol);
  ctx.verdict("bc_residual", dg.bc_residual <= tol);
  ctx.verdict("pressure_decay", zero_profile || slope <= -0.7);
}

// ---------------------------------------------------------------- semigroup

EstimateSweep time_sweep(const SolverConfig& cfg, std::uint64_t seed) {
  EstimateSweep s;
  s.min = cfg.sweep.t_min;
  s.max = cfg.sweep.t_max;
  s.n_points = cfg.sweep.n_points;
  s.trials = cfg.sweep.trials;
  s.exponents = cfg.sweep.exponents;
  s.rho = cfg.ns.rho;
  s.seed = seed;
  s.contour = cfg.contour;
  s.quadrature_tol = cfg.tolerances.quadrature;
  return s;
}

EstimateSweep lambda_sweep(const SolverConfig& cfg, std::uint64_t seed) {
  EstimateSweep s = time_sweep(cfg, seed);
  s.min = cfg.sweep.lambda_min;
  s.max = cfg.sweep.lambda_max;
  s.angles = cfg.sweep.angles;
  return s;
}

void run_semigroup(const SolverConfig& cfg, Context& ctx) {
  auto g = grid_from_config(cfg);
  const GridField f = sample_field(g, cfg.field);
  const double tol = cfg.tolerances.quadrature;
  const std::vector<double> times = log_lattice(cfg.sweep.t_min, cfg.sweep.t_max, cfg.sweep.n_points);
  SemigroupRequest req;
  req.gradient = true;
  const auto outs = apply_semigroup_times(f, times, cfg.contour, tol, req);
  const UlocSpec us{cfg.ns.q, cfg.ns.rho};
  Csv prof(ctx.path("semigroup_profile.csv"), {"t", "uloc_u", "sup_u", "uloc_grad_u"});
  for (std::size_t i = 0; i < times.size(); ++i)
    prof.row({format_number(times[i]), format_number(uloc_norm(outs[i].u, us)), format_number(outs[i].u.max_abs()),
              format_number(uloc_norm(outs[i].grad_u, us))});

  auto gap = [](const GridField& a, const GridField& b) {
    const double n = b.max_abs();
    return n > 0 ? (a - b).max_abs() / n : a.max_abs();
  };
  Csv checks(ctx.path("semigroup_checks.csv"), {"check", "t", "gap"});
  double heat = 0;
  for (double t : times) {
    if (t < 0.1 || t > 10) continue;
    const double e = gap(dirichlet_heat_by_contour(f, build_contour(t, cfg.contour, tol)), heat_reflection_oracle(t, f));
    heat = std::max(heat, e);
    checks.row({"heat_oracle", format_number(t), format_number(e)});
  }
  const double s = 0.3, t = 0.5;
  const GridField direct = apply_semigroup(s + t, f, build_contour(s + t, cfg.contour, tol));
  const GridField composed =
      apply_semigroup(s, apply_semigroup(t, f, build_contour(t, cfg.contour, tol)), build_contour(s, cfg.contour, tol));
  ContourSpec other = cfg.contour;
  other.eta = 2 * kPi / 3;
  other.kappa = 0.3;
  const double comp = gap(composed, direct);
  const double indep = gap(apply_semigroup(s + t, f, build_contour(s + t, other, tol)), direct);
  checks.row({"composition", format_number(s + t), format_number(comp)});
  checks.row({"contour_independence", format_number(s + t), format_number(indep)});
  ctx.verdict("heat_oracle", heat <= 1e-6);
  ctx.verdict("composition", comp <= 1e-6);
  ctx.verdict("contour_independence", indep <= 1e-6);

  const auto reps = fit_semigroup_estimates(g, time_sweep(cfg, ctx.seed));
  emit_constants(reps, ctx.path("semigroup_constants.csv"));
  emit_plot_data(reps, ctx.path("semigroup_samples.csv"));
  ctx.reports(reps);
}

// ---------------------------------------------------------------- ns-mild

void run_ns_mild(const SolverConfig& cfg, Context& ctx) {
  auto g = grid_from_config(cfg);
  const int d = cfg.dimension;
  PicardOptions o;
  o.horizon = cfg.ns.horizon;
  o.time_steps = cfg.ns.time_steps;
  o.q = cfg.ns.q;
  o.rho = cfg.ns.rho;
  o.tol = cfg.tolerances.fixed_point;
  o.max_sweeps = cfg.ns.max_sweeps;
  o.contour = cfg.contour;
  o.quadrature_tol = cfg.tolerances.quadrature;
  const double shape = horizon_shape(o.horizon, o.q, d);

  double gamma = cfg.ns.gamma;
  if (cfg.ns.calibrate_directions > 0) {
    const GammaCalibration cal = calibrate_gamma(g, o, cfg.ns.calibrate_directions, ctx.seed);
    gamma = cal.gamma;
    Csv c(ctx.path("gamma_calibration.csv"), {"direction", "seed", "threshold", "factor_at_threshold"});
    for (std::size_t i = 0; i < cal.direction_thresholds.size(); ++i)
      c.row({std::to_string(i), std::to_string(ctx.seed + i), format_number(cal.direction_thresholds[i]),
             format_number(cal.direction_factors[i])});
    ctx.verdict("calibration_contracts", cal.contracting == cal.directions);
  }

  GridField u0 = sample_field(g, cfg.field);
  double target = cfg.field.get("uloc_norm", -1.0);
  const double fraction = cfg.field.get("threshold_fraction", -1.0);
  if (fraction >= 0) {
    if (!(gamma > 0)) fail(ErrorCode::config, "field.threshold_fraction needs ns.gamma > 0 or a calibration");
    target = fraction * gamma / shape;
  }
  if (target >= 0) {
    const double n = uloc_norm(u0, {o.q, 1.0});
    if (!(n > 0)) fail(ErrorCode::config, "field.uloc_norm cannot rescale zero data");
    u0 = cd(target / n) * u0;
  }

  const Trajectory tr = picard_solve(u0, o);
  Csv log(ctx.path("contraction_log.csv"), {"sweep", "gap", "state"});
  for (std::size_t h = 0; h < tr.contraction_history.size(); ++h)
    log.row({std::to_string(h + 1), format_number(tr.contraction_history[h]),
             h + 1 == tr.contraction_history.size() ? picard_verdict_name(tr.verdict) : "ITERATING"});
  Csv st(ctx.path("states.csv"), {"t", "uloc", "weighted_sup", "weighted_grad", "total"});
  for (const auto& k : tr.norms())
    st.row({format_number(k.t), format_number(k.uloc), format_number(k.weighted_sup), format_number(k.weighted_grad),
            format_number(k.total())});
  Csv sum(ctx.path("ns_summary.csv"), {"metric", "value"});
  sum.values("initial_norm", {tr.initial_norm});
  sum.values("linear_kato_norm", {tr.linear_kato_norm});
  sum.values("kato_norm", {tr.kato_norm()});
  sum.values("contraction_factor", {tr.contraction_factor()});
  sum.values("sweeps", {double(tr.contraction_history.size())});
  sum.values("max_divergence", {tr.max_divergence});
  sum.values("max_boundary", {tr.max_boundary});
  sum.values("horizon_shape", {shape});
  if (gamma > 0) {
    sum.values("gamma", {gamma});
    sum.values("threshold", {gamma / shape});
    sum.values("a_priori_factor", {a_priori_contraction(tr.initial_norm, o.horizon, o.q, d, gamma)});
    if (o.q >= d) sum.values("existence_horizon", {existence_horizon(tr.initial_norm, o.q, d, gamma)});
  }
  const bool converged = tr.verdict == PicardVerdict::converged;
  ctx.verdict("picard", converged);
  ctx.verdict("kato_ball", converged && tr.kato_norm() <= 2 * tr.linear_kato_norm);
}

// ---------------------------------------------------------------- verify-estimates

void write_report_json(const EstimateReport& r, const std::string& path) {
  json j;
  j["estimate_id"] = r.estimate_id;
  j["samples"] = r.samples;
  j["fitted_constant"] = r.fitted_constant;
  j["stability_ratio"] = r.stability_ratio;
  j["shape_residual"] = r.shape_residual;
  j["verdict"] = verdict_name(r.verdict);
  j["excluded_points"] = r.excluded_points;
  json ex = json::object();
  for (const auto& [k, v] : r.extras) ex[k] = v;
  j["extras"] = ex;
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io, "cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

void run_verify_estimates(const SolverConfig& cfg, Context& ctx) {
  auto g = grid_from_config(cfg);
  EstimateSweep ls = lambda_sweep(cfg, ctx.seed), ts = time_sweep(cfg, ctx.seed);
  std::vector<EstimateReport> all;
  auto add = [&](std::vector<EstimateReport> v) {
    for (auto& r : v) all.push_back(std::move(r));
  };
  add(fit_resolvent_estimates(g, ls));
  ls.trials = cfg.sweep.bilinear_trials;
  add(fit_bilinear_resolvent_estimates(g, ls));
  add(fit_semigroup_estimates(g, ts));
  ts.trials = cfg.sweep.bilinear_trials;
  add(fit_bilinear_estimates(g, ts));
  emit_constants(all, ctx.path("estimates.csv"));
  emit_plot_data(all, ctx.path("estimate_samples.csv"));
  fs::create_directories(ctx.dir / "reports");
  for (const auto& r : all) write_report_json(r, ctx.path("reports/" + file_safe(r.estimate_id) + ".json"));
  ctx.reports(all);
}

// ---------------------------------------------------------------- verify-liouville

void run_verify_liouville(const SolverConfig& cfg, Context& ctx) {
  auto g = grid_from_config(cfg);
  const double eps = cfg.lambda.epsilon;
  const double tol = cfg.tolerances.residual;

  Csv par(ctx.path("parasitic.csv"), {"lambda_re", "lambda_im", "D1", "D2", "momentum", "divergence", "boundary"});
  double steady = 0;
  const std::vector<SectorPoint> lambdas{cfg.lambda, SectorPoint(0.01, 0.0, eps), SectorPoint(100.0, 2.0, eps)};
  const std::vector<std::array<double, 2>> Ds{{1.0, 0.0}, {0.5, -1.0}};
  for (const auto& l : lambdas)
    for (const auto& D : Ds) {
      const ParasiticResidual r = parasitic_residual(l, D, g);
      steady = std::max(steady, r.max());
      par.row({format_number(l.value().real()), format_number(l.value().imag()), format_number(D[0]),
               format_number(D[1]), format_number(r.momentum), format_number(r.divergence), format_number(r.boundary)});
    }

  Csv non(ctx.path("nonsteady.csv"), {"profile", "momentum", "boundary", "initial"});
  const std::vector<double> times = log_lattice(cfg.sweep.t_min, cfg.sweep.t_max, std::min(cfg.sweep.n_points, 5));
  double unsteady = 0;
  TimeProfile constant, wave;
  wave.frequency = 1.0;
  for (const auto& [name, D] : {std::pair<std::string, TimeProfile>{"constant", constant}, {"sine", wave}}) {
    const NonsteadyResidual r = nonsteady_parasitic_residual(D, g, times);
    unsteady = std::max(unsteady, r.max());
    non.row({name, format_number(r.momentum), format_number(r.boundary), format_number(r.initial)});
  }

  const GridField f = sample_field(g, cfg.field);
  const ResolventSolution sol = solve_resolvent(cfg.lambda, f);
  const std::vector<double> radii = decay_radii(g);
  const double inj = 0.1 * std::max(f.max_abs(), 1e-300);
  const LiouvilleCheck clean = liouville_pressure_check(sol, radii);
  const LiouvilleCheck injected = liouville_pressure_check(sol, radii, {inj, 0.0});
  Csv prof(ctx.path("liouville_profile.csv"), {"case", "radius", "value"});
  Csv summary(ctx.path("liouville_summary.csv"), {"case", "slope", "decay_ratio", "non_decaying"});
  auto emit = [&](const std::string& name, const LiouvilleCheck& c) {
    for (const auto& [R, v] : c.profile) prof.row({name, format_number(R), format_number(v)});
    summary.row({name, format_number(c.slope), format_number(c.decay_ratio), c.non_decaying ? "1" : "0"});
  };
  emit("clean", clean);
  emit("injected", injected);
  ctx.verdict("steady_parasitic", steady <= tol);
  ctx.verdict("nonsteady_parasitic", unsteady <= tol);
  ctx.verdict("clean_pressure_decays", !clean.non_decaying);
  ctx.verdict("injected_pressure_flagged", injected.non_decaying);
}

void write_manifest(const std::string& command, const SolverConfig& cfg, const Context& ctx, const RunResult& r) {
  json j;
  j["command"] = command;
  char hash[20];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config_hash(cfg)));
  j["config_hash"] = hash;
  j["seed"] = ctx.seed;
  j["tool_version"] = kToolVersion;
  j["threads"] = thread_count();
  j["wall_time_seconds"] = r.wall_time;
  j["status"] = static_cast<int>(r.status);
  j["outputs"] = r.outputs;
  json v = json::array();
  for (const auto& [name, verdict] : r.verdicts) v.push_back({{"name", name}, {"verdict", verdict_name(verdict)}});
  j["verdicts"] = v;
  if (!r.message.empty()) j["message"] = r.message;
  j["config"] = json::parse(config_to_json(cfg));
  std::ofstream out(ctx.dir / "manifest.json");
  if (out) out << j.dump(2) << '\n';
}

}  // namespace

std::vector<std::string> run_commands() {
  return {"resolvent", "semigroup", "ns-mild", "verify-kernels", "verify-estimates", "verify-liouville"};
}

void emit_plot_data(const std::vector<EstimateReport>& reports, const std::string& path) {
  std::vector<std::string> header{"estimate_id", "sample"};
  if (!reports.empty()) {
    for (const auto& r : reports)
      if (r.columns != reports.front().columns) fail(ErrorCode::invalid_argument, "reports with different columns");
    header.insert(header.end(), reports.front().columns.begin(), reports.front().columns.end());
  }
  Csv out(path, header);
  for (const auto& r : reports)
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
      std::vector<std::string> cells{quote(r.estimate_id), std::to_string(i)};
      for (double v : r.rows[i]) cells.push_back(format_number(v));
      out.row(cells);
    }
}

void emit_constants(const std::vector<EstimateReport>& reports, const std::string& path) {
  Csv out(path, {"estimate_id", "samples", "fitted_constant", "stability_ratio", "shape_residual", "excluded",
                 "in_stated_range", "verdict"});
  for (const auto& r : reports)
    out.row({quote(r.estimate_id), std::to_string(r.samples), format_number(r.fitted_constant),
             format_number(r.stability_ratio), format_number(r.shape_residual), std::to_string(r.excluded_points.size()),
             format_number(r.extra("in_stated_range", 1.0)), verdict_name(r.verdict)});
}

RunResult run_command(const std::string& command, const SolverConfig& cfg, const std::string& out_dir,
                      std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  RunResult res;
  Context ctx;
  ctx.dir = out_dir;
  ctx.seed = seed;
  ctx.result = &res;
  try {
    std::error_code ec;
    fs::create_directories(ctx.dir, ec);
    if (ec || !fs::is_directory(ctx.dir)) fail(ErrorCode::io, "cannot create output directory '" + out_dir + "'");
    if (command == "resolvent") {
      run_resolvent(cfg, ctx);
    } else if (command == "semigroup") {
      run_semigroup(cfg, ctx);
    } else if (command == "ns-mild") {
      run_ns_mild(cfg, ctx);
    } else if (command == "verify-kernels") {
      run_verify_kernels(cfg, ctx);
    } else if (command == "verify-estimates") {
      run_verify_estimates(cfg, ctx);
    } else if (command == "verify-liouville") {
      run_verify_liouville(cfg, ctx);
    } else {
      fail(ErrorCode::config, "unknown command '" + command + "'");
    }
    res.status = RunStatus::pass;
    for (const auto& [name, v] : res.verdicts)
      if (v == Verdict::fail) res.status = RunStatus::fail;
  } catch (const Error& e) {
    res.message = e.what();
    res.status = e.code() == ErrorCode::numerical ? RunStatus::numerical_failure : RunStatus::config_error;
  } catch (const std::exception& e) {
    res.message = e.what();
    res.status = RunStatus::numerical_failure;
  }
  res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!res.message.empty() && fs::is_directory(ctx.dir)) {
    std::ofstream err(ctx.dir / "error.txt");
    if (err) {
      err << res.message << '\n';
      res.outputs.push_back("error.txt");
    }
  }
  if (fs::is_directory(ctx.dir)) write_manifest(command, cfg, ctx, res);
  return res;
}

}  // namespace hs
