// SPDX-License-Identifier: Apache-2.0
#include "hs_stokes/uloc.hpp"

#include <algorithm>
#include <cmath>

namespace hs {

namespace {

// A sample on one axis: linear blend of two node indices plus a trapezoid weight.
struct Sample {
  std::size_t i0, i1;
  double t;  // value = (1-t) f[i0] + t f[i1]
  double w;
};

// Trapezoid samples of the piecewise-linear interpolant over [a, b] on sorted
// nodes z (non-periodic).
std::vector<Sample> vertical_samples(const std::vector<double>& z, double a, double b) {
  std::vector<std::pair<double, Sample>> pts;
  auto at = [&](double x) {
    auto it = std::upper_bound(z.begin(), z.end(), x);
    std::size_t j = it == z.begin() ? 0 : static_cast<std::size_t>(it - z.begin()) - 1;
    if (j + 1 >= z.size()) return Sample{z.size() - 1, z.size() - 1, 0.0, 0.0};
    return Sample{j, j + 1, (x - z[j]) / (z[j + 1] - z[j]), 0.0};
  };
  pts.push_back({a, at(a)});
  for (std::size_t k = 0; k < z.size(); ++k)
    if (z[k] > a && z[k] < b) pts.push_back({z[k], Sample{k, k, 0.0, 0.0}});
  pts.push_back({b, at(b)});
  std::vector<Sample> out;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    Sample s = pts[k].second;
    const double left = k > 0 ? pts[k].first - pts[k - 1].first : 0.0;
    const double right = k + 1 < pts.size() ? pts[k + 1].first - pts[k].first : 0.0;
    s.w = 0.5 * (left + right);
    out.push_back(s);
  }
  return out;
}

// Same on the periodic lattice x_i = i L / n over [a, a + rho].
std::vector<Sample> tangential_samples(int n, double L, double a, double rho) {
  const double h = L / n;
  std::vector<std::pair<double, Sample>> pts;
  auto at = [&](double x) {
    const double u = x / h;
    const double fl = std::floor(u + 1e-12);
    const double t = std::max(0.0, u - fl);
    const long j = static_cast<long>(fl);
    auto wrap = [&](long i) { return static_cast<std::size_t>(((i % n) + n) % n); };
    return Sample{wrap(j), wrap(j + 1), t < 1e-12 ? 0.0 : t, 0.0};
  };
  pts.push_back({a, at(a)});
  const long first = static_cast<long>(std::floor(a / h + 1e-12)) + 1;
  for (long i = first; i * h < a + rho - 1e-12 * L; ++i) pts.push_back({i * h, at(i * h)});
  pts.push_back({a + rho, at(a + rho)});
  std::vector<Sample> out;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    Sample s = pts[k].second;
    const double left = k > 0 ? pts[k].first - pts[k - 1].first : 0.0;
    const double right = k + 1 < pts.size() ? pts[k + 1].first - pts[k].first : 0.0;
    s.w = 0.5 * (left + right);
    if (left + right > 0) out.push_back(s);
  }
  return out;
}

void validate(const GridField& f, const UlocSpec& s, int* tiles) {
  require(f.grid != nullptr && f.components >= 1, "uloc norm needs a populated field");
  require(s.q >= 1 || s.q == kInfExponent, "q must be >= 1 or infinity");
  require(s.rho > 0, "rho must be positive");
  const double ratio = f.grid->box_length / s.rho;
  *tiles = static_cast<int>(std::lround(ratio));
  if (*tiles < 1 || std::abs(ratio - *tiles) > 1e-12 * std::max(1.0, ratio))
    fail(ErrorCode::invalid_argument, "rho must tile the box length exactly");
}

}  // namespace

std::vector<double> uloc_cube_norms(const GridField& f, const UlocSpec& spec) {
  int tiles = 0;
  validate(f, spec, &tiles);
  const auto& g = *f.grid;
  const int d = g.dimension;
  const int n = g.n_tangential;
  const double H = g.height();
  const int layers = std::max(1, static_cast<int>(std::ceil(H / spec.rho - 1e-12)));
  const bool inf = spec.q == kInfExponent;
  const std::size_t nv = g.n_vertical();
  auto mag = [&](std::size_t m, std::size_t k) {
    double s = 0;
    for (int c = 0; c < f.components; ++c) s += std::norm(f.at(c, m, k));
    return std::sqrt(s);
  };
  // |f| on the lattice
  std::vector<double> a(g.n_points() * nv);
  for (std::size_t m = 0; m < g.n_points(); ++m)
    for (std::size_t k = 0; k < nv; ++k) a[m * nv + k] = mag(m, k);

  std::vector<std::vector<Sample>> tx(tiles);
  for (int i = 0; i < tiles; ++i) tx[i] = tangential_samples(n, g.box_length, i * spec.rho, spec.rho);
  std::vector<std::vector<Sample>> vz(layers);
  for (int j = 0; j < layers; ++j) vz[j] = vertical_samples(g.vertical_nodes, j * spec.rho, std::min(H, (j + 1) * spec.rho));

  const int ny = d == 3 ? tiles : 1;
  std::vector<double> out(static_cast<std::size_t>(tiles) * ny * layers, 0.0);
  parallel_for(out.size(), [&](std::size_t idx) {
    const int j = static_cast<int>(idx % layers);
    const int i2 = static_cast<int>((idx / layers) % ny);
    const int i1 = static_cast<int>(idx / (layers * ny));
    static const std::vector<Sample> unit{{0, 0, 0.0, 1.0}};
    const auto& s2 = d == 3 ? tx[i2] : unit;
    double acc = 0;
    for (const auto& x1 : tx[i1])
      for (const auto& x2 : s2)
        for (const auto& z : vz[j]) {
          // bilinear / trilinear blend of |f|
          double v = 0;
          for (int b1 = 0; b1 < 2; ++b1) {
            const double w1 = b1 ? x1.t : 1 - x1.t;
            if (w1 == 0) continue;
            const std::size_t m1 = b1 ? x1.i1 : x1.i0;
            for (int b2 = 0; b2 < 2; ++b2) {
              const double w2 = d == 3 ? (b2 ? x2.t : 1 - x2.t) : (b2 ? 0.0 : 1.0);
              if (w2 == 0) continue;
              const std::size_t m = d == 3 ? m1 * n + (b2 ? x2.i1 : x2.i0) : m1;
              for (int b3 = 0; b3 < 2; ++b3) {
                const double w3 = b3 ? z.t : 1 - z.t;
                if (w3 == 0) continue;
                v += w1 * w2 * w3 * a[m * nv + (b3 ? z.i1 : z.i0)];
              }
            }
          }
          if (inf) {
            acc = std::max(acc, v);
          } else {
            acc += x1.w * x2.w * z.w * std::pow(v, spec.q);
          }
        }
    out[idx] = inf ? acc : std::pow(acc, 1.0 / spec.q);
  });
  return out;
}

double uloc_norm(const GridField& f, const UlocSpec& spec) {
  const auto v = uloc_cube_norms(f, spec);
  return *std::max_element(v.begin(), v.end());
}

KatoTerms kato_terms(double t, const GridField& u, double q, double rho) {
  require(t > 0, "trajectory times must be positive");
  const int d = u.grid->dimension;
  KatoTerms k;
  k.t = t;
  k.uloc = uloc_norm(u, {q, rho});
  const double sup_exp = q == kInfExponent ? 0.0 : d / (2 * q);
  k.weighted_sup = std::pow(t, sup_exp) * uloc_norm(u, {kInfExponent, rho});
  k.weighted_grad = std::sqrt(t) * uloc_norm(gradient(u), {q, rho});
  return k;
}

double kato_norm(const std::vector<std::pair<double, GridField>>& traj, double q, double rho) {
  require(!traj.empty(), "kato norm needs a nonempty trajectory");
  double best = 0, prev = 0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    require(traj[i].first > 0 && (i == 0 || traj[i].first > prev), "trajectory times must increase");
    prev = traj[i].first;
    best = std::max(best, kato_terms(traj[i].first, traj[i].second, q, rho).total());
  }
  return best;
}

}  // namespace hs
