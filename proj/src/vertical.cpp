// SPDX-License-Identifier: Apache-2.0
#include "hs_stokes/vertical.hpp"

#include <cmath>

namespace hs {

cd expm1c(cd z) {
  const double x = z.real(), y = z.imag();
  const double s = std::sin(0.5 * y);
  // e^{x+iy} - 1 = expm1(x) cos y + (cos y - 1) + i e^x sin y
  const double re = std::expm1(x) * std::cos(y) - 2.0 * s * s;
  const double im = std::exp(x) * std::sin(y);
  return {re, im};
}

std::array<cd, 4> exp_moments(cd x) {
  std::array<cd, 4> m{};
  if (std::abs(x) < 2.0) {
    // sum_n (-x)^n / (n! (n+k+1))
    cd term = 1.0;
    for (int k = 0; k < 4; ++k) m[k] = 1.0 / (k + 1.0);
    for (int n = 1; n < 40; ++n) {
      term *= -x / static_cast<double>(n);
      for (int k = 0; k < 4; ++k) m[k] += term / static_cast<double>(n + k + 1);
      if (std::abs(term) < 1e-18) break;
    }
    return m;
  }
  const cd e = std::exp(-x);
  m[0] = -expm1c(-x) / x;
  for (int k = 1; k < 4; ++k) m[k] = (static_cast<double>(k) * m[k - 1] - e) / x;
  return m;
}

namespace {

void poly_mul_linear(std::array<double, 4>& p, int deg, double root) {
  // p <- p * (t - root)
  for (int k = deg + 1; k >= 1; --k) p[k] = p[k - 1] - root * p[k];
  p[0] = -root * p[0];
}

}  // namespace

VerticalBasis::VerticalBasis(const std::vector<double>& nodes) : nodes_(nodes) {
  const int N = static_cast<int>(nodes.size()) - 1;
  require(N >= 1, "vertical grid needs at least one cell");
  const int n = std::min(4, N + 1);
  cells_.resize(N);
  for (int i = 0; i < N; ++i) {
    Cell& c = cells_[i];
    c.n = n;
    c.h = nodes[i + 1] - nodes[i];
    int first = i - (n == 4 ? 1 : 0);
    first = std::max(0, std::min(first, N + 1 - n));
    std::array<double, 4> t{};
    for (int j = 0; j < n; ++j) {
      c.nodes[j] = first + j;
      t[j] = (nodes[first + j] - nodes[i]) / c.h;
    }
    for (int j = 0; j < n; ++j) {
      std::array<double, 4> p{1.0, 0, 0, 0};
      double denom = 1.0;
      int deg = 0;
      for (int k = 0; k < n; ++k) {
        if (k == j) continue;
        poly_mul_linear(p, deg, t[k]);
        ++deg;
        denom *= t[j] - t[k];
      }
      for (int k = 0; k < 4; ++k) c.fwd[j][k] = p[k] / denom;
      // q(s) = p(1 - s)
      std::array<double, 4> q{};
      static const double binom[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
      for (int k = 0; k < 4; ++k) {
        for (int r = 0; r <= k; ++r) {
          q[r] += c.fwd[j][k] * binom[k][r] * ((r % 2) ? -1.0 : 1.0);
        }
      }
      for (int k = 0; k < 4; ++k) c.bwd[j][k] = q[k];
    }
  }
}

void VerticalBasis::derivative(const cd* phi, cd* out) const {
  const std::size_t N = cells_.size();
  auto slope = [&](std::size_t i, double t) {
    const Cell& c = cells_[i];
    cd s = 0;
    for (int j = 0; j < c.n; ++j) {
      const double dp = c.fwd[j][1] + 2 * c.fwd[j][2] * t + 3 * c.fwd[j][3] * t * t;
      s += phi[c.nodes[j]] * dp;
    }
    return s / c.h;
  };
  out[0] = slope(0, 0.0);
  out[N] = slope(N - 1, 1.0);
  for (std::size_t k = 1; k < N; ++k) out[k] = 0.5 * (slope(k - 1, 1.0) + slope(k, 0.0));
}

cd VerticalBasis::evaluate(const cd* phi, double z) const {
  std::size_t lo = 0, hi = cells_.size();
  if (z <= nodes_.front()) lo = 0;
  else if (z >= nodes_.back()) lo = cells_.size() - 1;
  else {
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if (nodes_[mid] <= z) lo = mid; else hi = mid;
    }
  }
  const Cell& c = cells_[lo];
  const double t = (z - nodes_[lo]) / c.h;
  cd s = 0;
  for (int j = 0; j < c.n; ++j) {
    const double v = c.fwd[j][0] + t * (c.fwd[j][1] + t * (c.fwd[j][2] + t * c.fwd[j][3]));
    s += phi[c.nodes[j]] * v;
  }
  return s;
}

ExpCellWeights exp_cell_weights(const VerticalBasis& b, cd rate) {
  ExpCellWeights w;
  w.rate = rate;
  const std::size_t N = b.n_cells();
  w.decay.resize(N);
  w.fwd.resize(N);
  w.bwd.resize(N);
  w.from_base.resize(N + 1);
  for (std::size_t i = 0; i < N; ++i) {
    const auto& c = b.cell(i);
    const cd x = rate * c.h;
    const auto m = exp_moments(x);
    w.decay[i] = std::exp(-x);
    for (int j = 0; j < 4; ++j) {
      cd f = 0, g = 0;
      for (int k = 0; k < 4; ++k) {
        f += c.fwd[j][k] * m[k];
        g += c.bwd[j][k] * m[k];
      }
      w.fwd[i][j] = c.h * f;
      w.bwd[i][j] = c.h * g;
    }
  }
  for (std::size_t k = 0; k <= N; ++k) w.from_base[k] = std::exp(-rate * b.nodes()[k]);
  return w;
}

void exp_sweep_into(const VerticalBasis& b, const ExpCellWeights& w, const cd* phi, cd* A, cd* B) {
  const std::size_t N = b.n_cells();
  A[0] = 0;
  for (std::size_t i = 0; i < N; ++i) {
    const auto& c = b.cell(i);
    cd s = 0;
    for (int j = 0; j < c.n; ++j) s += w.bwd[i][j] * phi[c.nodes[j]];
    A[i + 1] = w.decay[i] * A[i] + s;
  }
  B[N] = 0;
  for (std::size_t i = N; i-- > 0;) {
    const auto& c = b.cell(i);
    cd s = 0;
    for (int j = 0; j < c.n; ++j) s += w.fwd[i][j] * phi[c.nodes[j]];
    B[i] = w.decay[i] * B[i + 1] + s;
  }
}

ExpSweep exp_sweep(const VerticalBasis& b, const ExpCellWeights& w, const cd* phi) {
  ExpSweep s;
  s.A.resize(b.n_cells() + 1);
  s.B.resize(b.n_cells() + 1);
  exp_sweep_into(b, w, phi, s.A.data(), s.B.data());
  s.C = s.B[0];
  return s;
}

}  // namespace hs
