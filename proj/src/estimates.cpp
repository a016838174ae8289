// SPDX-License-Identifier: Apache-2.0
#include "hs_stokes/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "hs_stokes/fields.hpp"
#include "hs_stokes/leray.hpp"
#include "hs_stokes/resolvent.hpp"
#include "hs_stokes/semigroup.hpp"
#include "hs_stokes/uloc.hpp"

namespace hs {

double log_loss_shape(double lambda_abs) {
  return 1 + std::exp(-std::sqrt(lambda_abs)) * std::abs(std::log(lambda_abs));
}

double mixed_gain(double s, int d, double q, double p) {
  const double inv_p = p < 0 ? 0.0 : 1 / p;
  return std::pow(s, 0.5 * d * (1 / q - inv_p));
}

std::string exponent_label(double q) {
  if (q < 0) return "inf";
  std::ostringstream os;
  os << q;
  return os.str();
}

GridField estimate_trial_field(GridPtr g, std::uint64_t seed, int modes) {
  FieldSpec fs;
  fs.name = "random_solenoidal";
  fs.params = {{"seed", {double(seed)}}, {"modes", {double(modes)}}, {"ell", {1.0}}};
  GridField f = sample_field(g, fs);
  const double m = f.max_abs();
  return m > 0 ? cd(1 / m) * f : f;
}

namespace {

// Lattice of log positions with half the base spacing; base and extended use the even indices.
struct Lattice {
  double log_min = 0, h = 0;
  int last = 0;  // index of max
  int ext = 0;   // extra even indices on each side
  double value(int i) const { return std::pow(10.0, log_min + i * h); }
};

Lattice make_lattice(const EstimateSweep& s) {
  require(s.min > 0 && s.max > s.min, "sweep range must satisfy 0 < min < max");
  require(s.n_points >= 2 && s.trials >= 1, "sweep needs at least two points and one trial");
  Lattice l;
  l.log_min = std::log10(s.min);
  const double step = (std::log10(s.max) - l.log_min) / (s.n_points - 1);
  l.h = step / 2;
  l.last = 2 * (s.n_points - 1);
  l.ext = 2 * static_cast<int>(std::ceil(1 / step - 1e-9));
  return l;
}

double norm(const GridField& f, double q, double rho) { return uloc_norm(f, {q, rho}); }

// |a| |b| pointwise (Euclidean over components), a scalar field.
GridField product_magnitude(const GridField& a, const GridField& b) {
  GridField out(a.grid, 1);
  const std::size_t np = a.grid->n_points(), nv = a.grid->n_vertical();
  for (std::size_t m = 0; m < np; ++m)
    for (std::size_t k = 0; k < nv; ++k) {
      double sa = 0, sb = 0;
      for (int c = 0; c < a.components; ++c) sa += std::norm(a.at(c, m, k));
      for (int c = 0; c < b.components; ++c) sb += std::norm(b.at(c, m, k));
      out.at(0, m, k) = std::sqrt(sa * sb);
    }
  return out;
}

// Distinct q values of the exponent list.
std::vector<double> distinct_q(const EstimateSweep& s) {
  std::vector<double> qs;
  for (const auto& [q, p] : s.exponents)
    if (std::find(qs.begin(), qs.end(), q) == qs.end()) qs.push_back(q);
  return qs;
}

std::string pair_label(double q, double p) { return "[q=" + exponent_label(q) + ",p=" + exponent_label(p) + "]"; }
std::string single_label(double q) { return "[q=" + exponent_label(q) + "]"; }

// 1 < q <= p or 1 <= q < p (p = inf largest), plus an optional strict gap 1/q - 1/p < gap.
bool pair_in_range(double q, double p, double gap = std::numeric_limits<double>::infinity()) {
  const double inv_q = 1 / q, inv_p = p < 0 ? 0.0 : 1 / p;
  const bool ordered = (q > 1 && inv_q >= inv_p) || (q >= 1 && inv_q > inv_p);
  return ordered && inv_q - inv_p < gap;
}

}  // namespace

SweepLattice sweep_lattice(const EstimateSweep& s) {
  const Lattice l = make_lattice(s);
  SweepLattice out;
  for (int i = 0; i <= l.last; ++i) {
    out.doubled.push_back(l.value(i));
    if (i % 2 == 0) out.base.push_back(l.value(i));
  }
  for (int i = -l.ext; i <= l.last + l.ext; i += 2) out.extended.push_back(l.value(i));
  return out;
}

std::vector<EstimateReport> fit_estimates(const EstimateSweep& s, const MeasurementProbe& probe) {
  return fit_estimates(s, [&](const std::vector<double>& params, double angle, int trial) {
    std::vector<std::vector<Measurement>> out;
    for (double x : params) out.push_back(probe(x, angle, trial));
    return out;
  });
}

std::vector<EstimateReport> fit_estimates(const EstimateSweep& s, const BatchProbe& probe) {
  const Lattice l = make_lattice(s);
  struct Sample {
    double param, angle;
    int trial;
    int set;  // 0 base, 1 doubled only, 2 extended only
    Measurement m;
  };
  std::vector<Sample> samples;
  for (double angle : s.angles)
    for (int k = 0; k < 2 * s.trials; ++k) {
      // the first trials cover every lattice point, the added ones only the main range
      std::vector<int> idx;
      for (int i = -l.ext; i <= l.last + l.ext; ++i) {
        const bool inside = i >= 0 && i <= l.last;
        if (inside || (k < s.trials && i % 2 == 0)) idx.push_back(i);
      }
      std::vector<double> params;
      for (int i : idx) params.push_back(l.value(i));
      auto res = probe(params, angle, k);
      require(res.size() == params.size(), "probe must answer every parameter");
      for (std::size_t j = 0; j < idx.size(); ++j) {
        const int i = idx[j];
        const bool inside = i >= 0 && i <= l.last;
        const int set = inside ? (i % 2 == 0 && k < s.trials ? 0 : 1) : 2;
        for (auto& m : res[j]) samples.push_back({params[j], angle, k, set, std::move(m)});
      }
    }
  // one report per id, in first-seen order
  std::vector<std::string> ids;
  for (const auto& x : samples)
    if (std::find(ids.begin(), ids.end(), x.m.id) == ids.end()) ids.push_back(x.m.id);
  std::vector<EstimateReport> reports;
  for (const auto& id : ids) {
    EstimateReport r;
    r.estimate_id = id;
    r.columns = {"param", "angle", "trial", "sample_set", "lhs", "rhs", "shape", "ratio"};
    double c_base = 0, c_doubled = 0, c_ext = 0;
    bool in_range = true, finite = true;
    for (const auto& x : samples) {
      if (x.m.id != id) continue;
      in_range = in_range && x.m.in_range;
      if (x.m.rhs == 0 || x.m.shape == 0) {
        std::ostringstream os;
        os << "param=" << x.param << " angle=" << x.angle << " trial=" << x.trial << ": zero data norm";
        r.excluded_points.push_back(os.str());
        continue;
      }
      const double ratio = x.m.lhs / (x.m.shape * x.m.rhs);
      if (!std::isfinite(ratio)) finite = false;
      r.rows.push_back({x.param, x.angle, double(x.trial), double(x.set), x.m.lhs, x.m.rhs, x.m.shape, ratio});
      if (x.set == 0) {
        ++r.samples;
        c_base = std::max(c_base, ratio);
      }
      if (x.set <= 1) c_doubled = std::max(c_doubled, ratio);
      if (x.set != 1) c_ext = std::max(c_ext, ratio);
    }
    r.fitted_constant = finite ? c_base : std::numeric_limits<double>::infinity();
    r.stability_ratio = c_base > 0 ? c_doubled / c_base : 1.0;
    r.shape_residual = c_base > 0 ? c_ext / c_base - 1 : 0.0;
    r.extras = {{"range_min", s.min},
                {"range_max", s.max},
                {"extended_min", l.value(-l.ext)},
                {"extended_max", l.value(l.last + l.ext)},
                {"doubled_constant", c_doubled},
                {"extended_constant", c_ext},
                {"in_stated_range", in_range ? 1.0 : 0.0}};
    const bool ok = finite && r.samples > 0 && c_base > 0 && r.stability_ratio <= s.stability_limit &&
                    r.shape_residual <= s.shape_limit;
    r.verdict = ok ? Verdict::pass : Verdict::fail;
    reports.push_back(std::move(r));
  }
  return reports;
}

std::vector<EstimateReport> fit_resolvent_estimates(GridPtr g, const EstimateSweep& s) {
  const int d = g->dimension;
  const auto qs = distinct_q(s);
  ResolventOptions opt;
  opt.diagnostics = false;
  std::map<int, GridField> trials;
  auto trial = [&](int k) -> const GridField& {
    auto it = trials.find(k);
    if (it == trials.end()) it = trials.emplace(k, estimate_trial_field(g, s.seed + k)).first;
    return it->second;
  };
  return fit_estimates(s, [&](double r, double angle, int k) {
    const GridField& f = trial(k);
    const ResolventSolution sol = solve_resolvent(SectorPoint(r, angle, kPi / 8), f, opt);
    const GridField grad = modes_velocity_gradient(sol.modes), hess = modes_velocity_hessian(sol.modes);
    std::vector<Measurement> out;
    for (double q : qs) {
      const double fq = norm(f, q, s.rho);
      const bool ok = q > 1 || q < 0;
      out.push_back({"resolvent.u" + single_label(q), r * norm(sol.u, q, s.rho), fq, 1.0, ok});
      out.push_back({"resolvent.grad_u" + single_label(q), std::sqrt(r) * norm(grad, q, s.rho), fq, 1.0, ok});
      if (q > 0) {
        out.push_back({"resolvent.hess_u" + single_label(q), norm(hess, q, s.rho), fq, log_loss_shape(r), q > 1});
        out.push_back({"resolvent.grad_p" + single_label(q), norm(sol.grad_p, q, s.rho), fq, log_loss_shape(r), q > 1});
      }
    }
    for (const auto& [q, p] : s.exponents) {
      const double fq = norm(f, q, s.rho), gain = 1 + mixed_gain(r, d, q, p);
      const bool ok = pair_in_range(q, p, 1.0 / d);
      out.push_back({"resolvent.mixed_u" + pair_label(q, p), norm(sol.u, p, s.rho), fq, gain / r, ok});
      out.push_back({"resolvent.mixed_grad_u" + pair_label(q, p), norm(grad, p, s.rho), fq, gain / std::sqrt(r), ok});
    }
    return out;
  });
}

std::vector<EstimateReport> fit_semigroup_estimates(GridPtr g, const EstimateSweep& s0) {
  EstimateSweep s = s0;
  s.angles = {0.0};
  const int d = g->dimension;
  const auto qs = distinct_q(s);
  SemigroupRequest req;
  req.gradient = req.hessian = req.time_derivative = true;
  return fit_estimates(s, [&](const std::vector<double>& times, double, int k) {
    const GridField f = estimate_trial_field(g, s.seed + k);
    const auto outs = apply_semigroup_times(f, times, s.contour, s.quadrature_tol, req);
    std::vector<std::vector<Measurement>> all;
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double t = times[i];
      const SemigroupOutput& o = outs[i];
      std::vector<Measurement> out;
      for (double q : qs) {
        const double fq = norm(f, q, s.rho);
        const bool ok = q > 1 || q < 0;
        out.push_back({"semigroup.u" + single_label(q), norm(o.u, q, s.rho), fq, 1.0, ok});
        out.push_back({"semigroup.grad_u" + single_label(q), std::sqrt(t) * norm(o.grad_u, q, s.rho), fq, 1.0, ok});
        out.push_back({"semigroup.time_derivative" + single_label(q), t * norm(o.du_dt, q, s.rho), fq, 1.0, ok});
        if (q > 0)
          out.push_back({"semigroup.hess_u" + single_label(q),
                         t / std::log(std::exp(1.0) + t) * norm(o.hess_u, q, s.rho), fq, 1.0, q > 1});
      }
      for (const auto& [q, p] : s.exponents) {
        const double fq = norm(f, q, s.rho), gain = 1 / mixed_gain(t, d, q, p) + 1;
        const bool ok = pair_in_range(q, p);
        out.push_back({"semigroup.mixed_u" + pair_label(q, p), norm(o.u, p, s.rho), fq, gain, ok});
        out.push_back(
            {"semigroup.mixed_grad_u" + pair_label(q, p), norm(o.grad_u, p, s.rho), fq, gain / std::sqrt(t), ok});
      }
      all.push_back(std::move(out));
    }
    return all;
  });
}

namespace {

struct BilinearTrial {
  GridField F;        // P div (u (x) v), spectral input of the linear solves
  GridField uv;       // |u| |v|
  GridField mixed;    // |u| |grad v| + |v| |grad u|
};

BilinearTrial make_bilinear_trial(GridPtr g, std::uint64_t seed) {
  const GridField u = estimate_trial_field(g, seed), v = estimate_trial_field(g, seed + 7919);
  BilinearTrial t{project_div(tensor_product(u, v)), product_magnitude(u, v),
                  product_magnitude(u, gradient(v)) + product_magnitude(v, gradient(u))};
  return t;
}

}  // namespace

std::vector<EstimateReport> fit_bilinear_resolvent_estimates(GridPtr g, const EstimateSweep& s) {
  const int d = g->dimension;
  const auto qs = distinct_q(s);
  std::map<int, BilinearTrial> trials;
  auto trial = [&](int k) -> const BilinearTrial& {
    auto it = trials.find(k);
    if (it == trials.end()) it = trials.emplace(k, make_bilinear_trial(g, s.seed + 2 * k)).first;
    return it->second;
  };
  ResolventOptions opt;
  opt.diagnostics = false;
  opt.check_input = false;
  return fit_estimates(s, [&](double r, double angle, int k) {
    const BilinearTrial& b = trial(k);
    const ResolventSolution sol = solve_resolvent(SectorPoint(r, angle, kPi / 8), b.F, opt);
    const GridField grad = modes_velocity_gradient(sol.modes);
    std::vector<Measurement> out;
    for (const auto& [q, p] : s.exponents) {
      const bool ok = pair_in_range(q, p, 1.0 / d);
      out.push_back({"bilinear_resolvent.u" + pair_label(q, p), norm(sol.u, p, s.rho), norm(b.uv, q, s.rho),
                     (1 + mixed_gain(r, d, q, p)) / std::sqrt(r), ok});
    }
    for (double q : qs)
      out.push_back({"bilinear_resolvent.grad_u" + single_label(q), norm(grad, q, s.rho), norm(b.mixed, q, s.rho),
                     1 / std::sqrt(r), true});
    return out;
  });
}

std::vector<EstimateReport> fit_bilinear_estimates(GridPtr g, const EstimateSweep& s0) {
  EstimateSweep s = s0;
  s.angles = {0.0};
  const int d = g->dimension;
  const auto qs = distinct_q(s);
  SemigroupRequest req;
  req.gradient = true;
  req.check_input = false;
  return fit_estimates(s, [&](const std::vector<double>& times, double, int k) {
    const BilinearTrial b = make_bilinear_trial(g, s.seed + 2 * k);
    const auto outs = apply_semigroup_times(b.F, times, s.contour, s.quadrature_tol, req);
    std::vector<std::vector<Measurement>> all;
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double t = times[i];
      const SemigroupOutput& o = outs[i];
      std::vector<Measurement> out;
      for (const auto& [q, p] : s.exponents) {
        const double uvq = norm(b.uv, q, s.rho), gain = 1 / mixed_gain(t, d, q, p) + 1;
        const bool ok = pair_in_range(q, p);
        out.push_back({"bilinear.u" + pair_label(q, p), norm(o.u, p, s.rho), uvq, gain / std::sqrt(t), ok});
        out.push_back({"bilinear.grad_u" + pair_label(q, p), norm(o.grad_u, p, s.rho), uvq, gain / t, ok});
      }
      for (double q : qs)
        out.push_back({"bilinear.grad_u_product" + single_label(q), norm(o.grad_u, q, s.rho),
                       norm(b.mixed, q, s.rho), 1 / std::sqrt(t), true});
      all.push_back(std::move(out));
    }
    return all;
  });
}

}  // namespace hs
