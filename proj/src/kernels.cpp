// SPDX-License-Identifier: Apache-2.0
#include "hs_stokes/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hs_stokes/quadrature.hpp"
#include "hs_stokes/symbols.hpp"

namespace hs {

namespace {

constexpr int kMaxHarmonic = 7;
constexpr int kAngSamples = 16;
constexpr std::size_t kPolishStarts = 4;

struct Harmonic {
  int n;
  std::array<cd, 4> coef;  // per output component
};

// Angular factor of component c at unit direction e.
cd angular_factor(KernelId id, int d, int c, const KernelDeriv& dv, double e1, double e2) {
  const double e[2] = {e1, e2};
  cd base = 1.0;
  const cd I(0, 1);
  switch (id) {
    case KernelId::k1:
    case KernelId::k2: break;
    case KernelId::r_prime: base = e[c / (d - 1)] * e[c % (d - 1)]; break;
    case KernelId::r_d:
    case KernelId::q: base = I * e[c]; break;
  }
  for (int j = 0; j < d - 1; ++j)
    for (int k = 0; k < dv.tangential[j]; ++k) base *= I * e[j];
  return base;
}

int radial_power(KernelId id) {
  return (id == KernelId::r_prime || id == KernelId::r_d) ? 1 : 0;
}

// Radial symbol including vertical derivatives, without the angular factor.
cd radial_symbol(const KernelQuery& q, double rho) {
  const cd l = q.lambda.value();
  const cd w = omega(l, rho);
  const int a = q.deriv.yd, b = q.deriv.zd;
  switch (q.id) {
    case KernelId::k1: {
      const double sg = q.y_d >= 0 ? 1.0 : -1.0;
      return std::exp(-w * std::abs(q.y_d)) / (2.0 * w) * std::pow(-w * sg, a);
    }
    case KernelId::k2:
      return std::exp(-w * (q.y_d + q.z_d)) / (2.0 * w) * std::pow(-w, a + b);
    case KernelId::r_prime:
    case KernelId::r_d: {
      const NonlocalFactor m = nonlocal_factor(l, w, rho, q.y_d);
      const cd my = a == 0 ? m.m : (a == 1 ? m.dm : m.ddm);
      return my * std::pow(-w, b) * std::exp(-w * q.z_d);
    }
    case KernelId::q:
      return std::exp(-rho * q.y_d) * std::pow(-rho, a) * std::exp(-w * q.z_d) * std::pow(-w, b) *
             (1.0 + rho / w);
  }
  return 0;
}

void validate(const KernelQuery& q) {
  require(q.dimension == 2 || q.dimension == 3, "dimension must be 2 or 3");
  const auto& dv = q.deriv;
  require(dv.tangential[0] >= 0 && dv.tangential[1] >= 0 && dv.yd >= 0 && dv.zd >= 0,
          "negative derivative order");
  require(q.dimension == 3 || dv.tangential[1] == 0, "second tangential axis absent in d=2");
  const int max_order = q.id == KernelId::q ? 3 : 2;
  require(dv.order() <= max_order, "derivative order out of range");
  if (q.id == KernelId::k1) {
    require(dv.zd == 0, "k1 has no z_d argument");
    require(!(q.y_d == 0 && dv.yd % 2 == 1), "odd vertical derivative of k1 at y_d = 0");
  } else {
    require(q.y_d >= 0 && q.z_d >= 0, "heights must be nonnegative");
  }
  if ((q.id == KernelId::r_prime || q.id == KernelId::r_d)) require(dv.yd <= 2, "order too high");
  const double rp = std::hypot(q.y_prime[0], q.dimension == 3 ? q.y_prime[1] : 0.0);
  const double sigma = q.id == KernelId::k1 ? std::abs(q.y_d) : q.y_d + q.z_d;
  if (rp == 0 && sigma == 0) fail(ErrorCode::invalid_argument, "kernel queried at the singular point");
  require(q.tol > 0, "tolerance must be positive");
}

}  // namespace

const char* kernel_name(KernelId id) {
  switch (id) {
    case KernelId::k1: return "k1";
    case KernelId::k2: return "k2";
    case KernelId::r_prime: return "r_prime";
    case KernelId::r_d: return "r_d";
    case KernelId::q: return "q";
  }
  return "?";
}

KernelId parse_kernel(const std::string& name) {
  for (KernelId id : {KernelId::k1, KernelId::k2, KernelId::r_prime, KernelId::r_d, KernelId::q})
    if (name == kernel_name(id)) return id;
  fail(ErrorCode::invalid_argument, "unknown kernel '" + name + "'");
}

int kernel_components(KernelId id, int d) {
  switch (id) {
    case KernelId::k1:
    case KernelId::k2: return 1;
    case KernelId::r_prime: return (d - 1) * (d - 1);
    case KernelId::r_d:
    case KernelId::q: return d - 1;
  }
  return 0;
}

KernelValue eval_kernel(const KernelQuery& q) {
  validate(q);
  const int d = q.dimension;
  const int nc = kernel_components(q.id, d);
  const int p = d - 2 + radial_power(q.id) + q.deriv.tangential_order();
  const double r = d == 2 ? std::abs(q.y_prime[0]) : std::hypot(q.y_prime[0], q.y_prime[1]);
  const double sigma = q.id == KernelId::k1 ? std::abs(q.y_d) : q.y_d + q.z_d;

  VecFun f;
  if (d == 2) {
    std::array<cd, 4> fp{}, fm{};
    for (int c = 0; c < nc; ++c) {
      fp[c] = angular_factor(q.id, d, c, q.deriv, 1.0, 0.0);
      fm[c] = angular_factor(q.id, d, c, q.deriv, -1.0, 0.0);
    }
    const double y1 = q.y_prime[0];
    f = [&, fp, fm, y1](double rho) {
      const cd m = radial_symbol(q, rho) * std::pow(rho, p);
      const cd ep = std::exp(cd(0, rho * y1));
      const cd em = std::conj(ep);
      Vec4 out{};
      for (int c = 0; c < nc; ++c) out[c] = m * (fp[c] * ep + fm[c] * em);
      return out;
    };
  } else {
    // trigonometric coefficients of the angular factor, folded with e^{in psi} 2 pi i^n
    const double psi = r > 0 ? std::atan2(q.y_prime[1], q.y_prime[0]) : 0.0;
    std::vector<Harmonic> harm;
    double scale = 0;
    for (int n = -kMaxHarmonic; n <= kMaxHarmonic; ++n) {
      Harmonic h{n, {}};
      for (int c = 0; c < nc; ++c) {
        cd t = 0;
        for (int s = 0; s < kAngSamples; ++s) {
          const double phi = 2 * kPi * s / kAngSamples;
          t += angular_factor(q.id, d, c, q.deriv, std::cos(phi), std::sin(phi)) *
               std::exp(cd(0, -n * phi));
        }
        t /= double(kAngSamples);
        scale = std::max(scale, std::abs(t));
        h.coef[c] = t;
      }
      harm.push_back(h);
    }
    std::vector<Harmonic> kept;
    for (auto& h : harm) {
      double mx = 0;
      for (int c = 0; c < nc; ++c) mx = std::max(mx, std::abs(h.coef[c]));
      if (mx <= 1e-14 * scale) continue;
      // 2 pi i^n e^{i n psi}
      const cd fac = 2 * kPi * std::pow(cd(0, 1), h.n) * std::exp(cd(0, h.n * psi));
      for (int c = 0; c < nc; ++c) h.coef[c] *= fac;
      kept.push_back(h);
    }
    f = [&, kept](double rho) {
      const cd m = radial_symbol(q, rho) * std::pow(rho, p);
      Vec4 out{};
      for (const auto& h : kept) {
        const int an = std::abs(h.n);
        double j = r == 0 ? (an == 0 ? 1.0 : 0.0) : std::cyl_bessel_j(double(an), rho * r);
        if (h.n < 0 && (an % 2 == 1)) j = -j;
        for (int c = 0; c < nc; ++c) out[c] += h.coef[c] * j;
      }
      for (int c = 0; c < nc; ++c) out[c] *= m;
      return out;
    };
  }

  const QuadResult res = integrate_half_line(f, r, sigma, q.tol);
  const double norm = std::pow(2 * kPi, -(d - 1));
  KernelValue kv;
  kv.value.resize(nc);
  for (int c = 0; c < nc; ++c) kv.value[c] = res.value[c] * norm;
  kv.error = res.error * norm;
  kv.converged = res.converged;
  kv.evaluations = res.evaluations;
  return kv;
}

double scaling_exponent(KernelId id, const KernelDeriv& deriv, int d) {
  const double base = id == KernelId::q ? 0.5 * (d - 1) : 0.5 * d - 1;
  return base + 0.5 * deriv.order();
}

ScalingCheck scaling_gap(const KernelQuery& q) {
  const double mod = q.lambda.modulus;
  const double s = std::sqrt(mod);
  KernelQuery unit = q;
  unit.lambda = SectorPoint(1.0, q.lambda.argument, q.lambda.epsilon);
  unit.y_prime = {s * q.y_prime[0], s * q.y_prime[1]};
  unit.y_d = s * q.y_d;
  unit.z_d = s * q.z_d;
  const KernelValue a = eval_kernel(q);
  const KernelValue b = eval_kernel(unit);
  const double f = std::pow(mod, scaling_exponent(q.id, q.deriv, q.dimension));
  ScalingCheck out;
  double diff = 0, mag = 0;
  for (std::size_t c = 0; c < a.value.size(); ++c) {
    diff = std::max(diff, std::abs(a.value[c] - f * b.value[c]));
    mag = std::max(mag, std::abs(a.value[c]));
  }
  out.magnitude = mag;
  out.gap = mag > 0 ? diff / mag : diff;
  out.converged = a.converged && b.converged;
  return out;
}

namespace {

enum class BoundForm { none, k0, k1st, k2nd, r1, r2, r3, r4, r5, r6, q1, q2, q3, q2p };

BoundForm classify(KernelId id, const KernelDeriv& dv) {
  const int t = dv.tangential_order(), a = dv.yd, b = dv.zd, o = dv.order();
  switch (id) {
    case KernelId::k1:
      if (b != 0) return BoundForm::none;
      [[fallthrough]];
    case KernelId::k2:
      if (o == 0) return BoundForm::k0;
      if (o == 1) return BoundForm::k1st;
      if (o == 2) return BoundForm::k2nd;
      return BoundForm::none;
    case KernelId::r_prime:
    case KernelId::r_d:
      if (a == 0 && b == 0) return t == 0 ? BoundForm::r1 : (t <= 2 ? BoundForm::r2 : BoundForm::none);
      if (a == 1 && b == 0 && t <= 1) return BoundForm::r3;
      if (a == 2 && b == 0 && t == 0) return BoundForm::r4;
      if (a == 0 && b == 1 && t <= 1) return BoundForm::r5;
      if (a == 1 && b == 1 && t == 0) return BoundForm::r6;
      return BoundForm::none;
    case KernelId::q:
      if (o == 0) return BoundForm::q1;
      if (b == 0 && ((a == 0 && t <= 3) || (t == 0 && a <= 3))) return BoundForm::q2;
      if (b == 0 && a == 1 && t == 1) return BoundForm::q3;
      if (b == 1 && t + a <= 2) return BoundForm::q2p;
      return BoundForm::none;
  }
  return BoundForm::none;
}

}  // namespace

bool has_bound(KernelId id, const KernelDeriv& dv) { return classify(id, dv) != BoundForm::none; }

double bound_envelope(KernelId id, const KernelDeriv& dv, int d, cd lambda,
                      std::array<double, 2> yp, double y, double z, double c) {
  require(d == 2 || d == 3, "dimension must be 2 or 3");
  require(c > 0, "c_decay must be positive");
  const BoundForm form = classify(id, dv);
  if (form == BoundForm::none) {
    std::ostringstream os;
    os << "no stated bound for " << kernel_name(id) << " with derivative (" << dv.tangential_order()
       << "," << dv.yd << "," << dv.zd << ")";
    fail(ErrorCode::invalid_argument, os.str());
  }
  const double rp = std::hypot(yp[0], d == 3 ? yp[1] : 0.0);
  const double L = std::sqrt(std::abs(lambda));
  const double lm = std::abs(lambda);
  const int t = dv.tangential_order();
  if (id == KernelId::k1) {
    const double s = std::abs(y) + rp;
    require(s > 0, "envelope at the singular point");
    const double E = std::exp(-c * L * std::abs(y));
    switch (form) {
      case BoundForm::k0:
        if (d == 2) return E * std::min(std::log(std::exp(1.0) + 1.0 / (L * s)), 1.0 / (lm * s * s));
        return E / (std::pow(s, d - 2) * std::pow(1 + L * s, 2));
      case BoundForm::k1st: return E / (std::pow(s, d - 1) * std::pow(1 + L * s, 2));
      default: return E / (std::pow(s, d - 2 + dv.order()) * (1 + L * s));
    }
  }
  require(y >= 0 && z >= 0, "heights must be nonnegative");
  const double s = y + z + rp;
  require(s > 0, "envelope at the singular point");
  if (id == KernelId::k2) {
    const double E = std::exp(-c * L * (y + z));
    switch (form) {
      case BoundForm::k0:
        if (d == 2) return E * std::min(std::log(std::exp(1.0) + 1.0 / (L * s)), 1.0 / (lm * s * s));
        return E / (std::pow(s, d - 2) * std::pow(1 + L * s, 2));
      case BoundForm::k1st: return E / (std::pow(s, d - 1) * std::pow(1 + L * s, 2));
      default: return E / (std::pow(s, d - 2 + dv.order()) * (1 + L * s));
    }
  }
  const double E = std::exp(-c * L * z);
  const double g1 = 1 + L * s, g2 = 1 + L * (y + z);
  switch (form) {
    case BoundForm::r1:
    case BoundForm::r2: return y / std::pow(s, d - 1 + t) * E / (g1 * g2);
    case BoundForm::r3: return 1.0 / std::pow(s, d - 1 + t) * E / (g1 * g2);
    case BoundForm::r4: return E / (std::pow(s, d) * g2);
    case BoundForm::r5: return y / std::pow(s, d + t) * E / g2;
    case BoundForm::r6: return E / (std::pow(s, d) * g2);
    case BoundForm::q1: return E / std::pow(s, d - 1);
    case BoundForm::q2: return E / std::pow(s, d - 1 + dv.order());
    case BoundForm::q3: return E / std::pow(s, d + 1);
    case BoundForm::q2p: return E / std::pow(s, d - 1 + t + dv.yd) * (L + 1.0 / s);
    default: break;
  }
  return 0;
}

namespace {

struct RatioProbe {
  double ratio = 0, mag = 0, env = 0;
  int status = 0;  // 0 ok, 1 quadrature, 2 envelope underflow
  cd lambda;
  double rp = 0, y = 0, z = 0;
};

}  // namespace

EstimateReport check_bound_ratio(KernelId id, int tangential_order, int yd, int zd,
                                 const SamplePlan& plan) {
  const int d = plan.dimension;
  require(d == 2 || d == 3, "dimension must be 2 or 3");
  require(plan.n_samples >= 1, "empty sample plan");
  KernelDeriv probe;
  probe.tangential = {tangential_order, 0};
  probe.yd = yd;
  probe.zd = zd;
  require(has_bound(id, probe), "no stated bound for this kernel/derivative pair");

  // tangential splits of the requested order
  std::vector<KernelDeriv> splits;
  for (int j = 0; j <= (d == 3 ? tangential_order : 0); ++j) {
    KernelDeriv dv = probe;
    dv.tangential = {tangential_order - j, j};
    splits.push_back(dv);
  }
  const double amp = kPi - plan.epsilon;
  // exponential rate: half the guaranteed rate on the sector
  const double c_decay = 0.5 * std::cos(0.5 * amp);
  auto logu = [](double u, double a, double b) { return a * std::pow(b / a, u); };

  // unit-cube coordinates -> sample point -> ratio
  auto evaluate = [&](const std::vector<double>& u) {
    RatioProbe pr;
    const double mod = logu(u[0], plan.lambda_min, plan.lambda_max);
    const double arg = (2 * u[1] - 1) * amp;
    pr.lambda = std::polar(mod, arg);
    pr.rp = logu(u[2], plan.radius_min, plan.radius_max);
    const double psi = 2 * kPi * u[3];
    pr.y = logu(u[4], plan.radius_min, plan.radius_max);
    pr.z = logu(u[5], plan.radius_min, plan.radius_max);
    if (id == KernelId::k1) {
      if (u[5] < 0.5) pr.y = -pr.y;  // both signs of y_d
      pr.z = 0;
    }
    KernelQuery q;
    q.id = id;
    q.dimension = d;
    q.lambda = SectorPoint(mod, arg, plan.epsilon);
    q.y_prime = d == 3 ? std::array<double, 2>{pr.rp * std::cos(psi), pr.rp * std::sin(psi)}
                       : std::array<double, 2>{(psi < kPi ? 1.0 : -1.0) * pr.rp, 0.0};
    q.y_d = pr.y;
    q.z_d = pr.z;
    q.tol = plan.tol;
    double sq = 0;
    bool ok = true;
    for (const auto& dv : splits) {
      q.deriv = dv;
      const KernelValue kv = eval_kernel(q);
      ok = ok && kv.converged;
      for (const auto& v : kv.value) sq += std::norm(v);
    }
    pr.mag = std::sqrt(sq);
    pr.env = bound_envelope(id, probe, d, pr.lambda, q.y_prime, pr.y, pr.z, c_decay);
    if (!ok) {
      pr.status = 1;
    } else if (!(pr.env > 0) || !std::isfinite(pr.env)) {
      pr.status = 2;
    } else {
      pr.ratio = pr.mag / pr.env;
    }
    return pr;
  };

  const std::size_t n_total = 2 * plan.n_samples;
  Halton hal(6, plan.seed);
  std::vector<std::vector<double>> pts(n_total);
  for (std::size_t i = 0; i < n_total; ++i) pts[i] = hal.point(i);
  std::vector<RatioProbe> probes(n_total);
  parallel_for(n_total, [&](std::size_t i) { probes[i] = evaluate(pts[i]); });

  // sup over the box: best samples polished by a bounded compass search
  auto polished_sup = [&](std::size_t n) {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    const std::size_t k = std::min<std::size_t>(kPolishStarts, n);
    std::partial_sort(order.begin(), order.begin() + k, order.end(),
                      [&](std::size_t a, std::size_t b) { return probes[a].ratio > probes[b].ratio; });
    std::vector<double> best(k, 0.0);
    parallel_for(k, [&](std::size_t j) {
      auto f = [&](const std::vector<double>& u) {
        const RatioProbe pr = evaluate(u);
        return pr.status == 0 ? pr.ratio : 0.0;
      };
      best[j] = maximize_in_box(f, pts[order[j]], 0.05, 1e-3, 600).value;
    });
    double c = 0;
    for (std::size_t i = 0; i < n; ++i) c = std::max(c, probes[i].ratio);
    for (double b : best) c = std::max(c, b);
    return c;
  };

  EstimateReport rep;
  std::ostringstream id_os;
  id_os << "kernel_bound:" << kernel_name(id) << ":d" << d << ":t" << tangential_order << "y" << yd
        << "z" << zd;
  rep.estimate_id = id_os.str();
  rep.samples = n_total;
  rep.columns = {"re_lambda", "im_lambda", "abs_y_prime", "y_d", "z_d", "abs_value", "envelope", "ratio"};
  for (std::size_t i = 0; i < n_total; ++i) {
    const RatioProbe& pr = probes[i];
    if (pr.status != 0) {
      std::ostringstream os;
      os << "sample " << i << ": " << (pr.status == 1 ? "quadrature not converged" : "envelope underflow");
      rep.excluded_points.push_back(os.str());
      continue;
    }
    rep.rows.push_back({pr.lambda.real(), pr.lambda.imag(), pr.rp, pr.y, pr.z, pr.mag, pr.env, pr.ratio});
  }
  const double c_half = polished_sup(plan.n_samples);
  const double c_full = polished_sup(n_total);
  double raw = 0;
  for (const auto& pr : probes) raw = std::max(raw, pr.ratio);
  rep.fitted_constant = c_full;
  rep.stability_ratio = c_half > 0 ? c_full / c_half : (c_full > 0 ? INFINITY : 1.0);
  rep.extras.push_back({"c_decay", c_decay});
  rep.extras.push_back({"constant_base_sample", c_half});
  rep.extras.push_back({"raw_sample_sup", raw});
  const bool finite = std::isfinite(c_full) && c_full > 0;
  rep.verdict = (finite && rep.stability_ratio <= 1.25 &&
                 rep.excluded_points.size() <= n_total / 100)
                    ? Verdict::pass
                    : Verdict::fail;
  return rep;
}

}  // namespace hs
