// SPDX-License-Identifier: Apache-2.0
#include "hs_stokes/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <queue>

namespace hs {

namespace {

double vnorm(const Vec4& v) {
  double m = 0;
  for (const auto& c : v) m = std::max(m, std::abs(c));
  return m;
}

Vec4 vadd(const Vec4& a, const Vec4& b) {
  Vec4 r;
  for (int i = 0; i < 4; ++i) r[i] = a[i] + b[i];
  return r;
}

struct Panel {
  double a, b;
  Vec4 value;
  double err, l1;
  bool operator<(const Panel& o) const { return err < o.err; }
};

Panel gk15(const VecFun& f, double a, double b) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  using G = boost::math::quadrature::gauss<double, 7>;
  static const auto& xk = GK::abscissa();
  static const auto& wk = GK::weights();
  static const auto& wg = G::weights();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  Vec4 k{}, g{};
  double l1 = 0;
  const Vec4 f0 = f(c);
  for (int i = 0; i < 4; ++i) {
    k[i] = f0[i] * wk[0];
    g[i] = f0[i] * wg[0];
  }
  l1 += vnorm(f0) * wk[0];
  for (std::size_t j = 1; j < xk.size(); ++j) {
    const Vec4 fp = f(c + h * xk[j]);
    const Vec4 fm = f(c - h * xk[j]);
    for (int i = 0; i < 4; ++i) {
      const cd s = fp[i] + fm[i];
      k[i] += s * wk[j];
      if (j % 2 == 0) g[i] += s * wg[j / 2];
    }
    l1 += (vnorm(fp) + vnorm(fm)) * wk[j];
  }
  Panel p{a, b, {}, 0, l1 * h};
  double e = 0;
  for (int i = 0; i < 4; ++i) {
    p.value[i] = k[i] * h;
    e = std::max(e, std::abs((k[i] - g[i]) * h));
  }
  p.err = e;
  return p;
}

}  // namespace

QuadResult integrate_adaptive(const VecFun& f, double a, double b, double abs_tol, double rel_tol,
                              int max_intervals, double l1_rel) {
  QuadResult res;
  if (b <= a) return res;
  std::priority_queue<Panel> heap;
  Panel p0 = gk15(f, a, b);
  heap.push(p0);
  Vec4 total = p0.value;
  double err = p0.err, l1 = p0.l1;
  long evals = 15;
  int count = 1;
  auto target = [&] { return std::max({abs_tol, rel_tol * vnorm(total), l1_rel * l1}); };
  while (err > target() && count < max_intervals) {
    Panel top = heap.top();
    heap.pop();
    const double m = 0.5 * (top.a + top.b);
    if (!(m > top.a && m < top.b)) {  // interval exhausted at machine precision
      heap.push(top);
      break;
    }
    Panel l = gk15(f, top.a, m), r = gk15(f, m, top.b);
    evals += 30;
    for (int i = 0; i < 4; ++i) total[i] += l.value[i] + r.value[i] - top.value[i];
    err += l.err + r.err - top.err;
    l1 += l.l1 + r.l1 - top.l1;
    heap.push(l);
    heap.push(r);
    ++count;
  }
  // re-sum to limit drift
  Vec4 sum{};
  double esum = 0, lsum = 0;
  while (!heap.empty()) {
    const Panel& t = heap.top();
    sum = vadd(sum, t.value);
    esum += t.err;
    lsum += t.l1;
    heap.pop();
  }
  res.value = sum;
  res.error = esum;
  res.l1 = lsum;
  res.evaluations = evals;
  res.converged = esum <= std::max({abs_tol, rel_tol * vnorm(sum), l1_rel * lsum}) * 1.0001;
  return res;
}

cd wynn_epsilon(const std::vector<cd>& s, double* err) {
  const std::size_t n = s.size();
  if (n == 0) return 0;
  const std::size_t start = n > 40 ? n - 40 : 0;
  const std::size_t m = n - start;
  // e[j] holds column j of the current anti-diagonal
  std::vector<cd> prev, cur;
  cd best = s.back(), prev_best = s.back();
  bool have_prev = false;
  for (std::size_t i = 0; i < m; ++i) {
    cur.assign(i + 1, cd(0));
    cur[0] = s[start + i];
    for (std::size_t k = 0; k < i; ++k) {
      const cd left = (k >= 1) ? prev[k - 1] : cd(0);
      const cd diff = cur[k] - prev[k];
      if (std::abs(diff) == 0) {
        cur.resize(k + 1);
        break;
      }
      cur[k + 1] = left + 1.0 / diff;
    }
    const std::size_t top = cur.size() - 1;
    const std::size_t ev = top - (top % 2);
    prev_best = best;
    best = cur[ev];
    have_prev = i > 0;
    prev = cur;
  }
  if (err) *err = have_prev ? std::abs(best - prev_best) : std::numeric_limits<double>::infinity();
  return best;
}

QuadResult integrate_half_line(const VecFun& f, double r_osc, double sigma, double rel_tol) {
  require(r_osc >= 0 && sigma >= 0, "invalid oscillation/decay parameters");
  require(r_osc > 0 || sigma > 0, "integrand neither decays nor oscillates");
  const double l1_floor = 1e-14;
  const double width = r_osc > 0 ? kPi / r_osc : 4.0 / sigma;
  const int max_panels = 3000;
  std::vector<std::vector<cd>> seq(4);
  QuadResult res;
  Vec4 sum{}, last{};
  double err = 0, l1 = 0;
  int small_run = 0, stable_run = 0;
  for (int k = 0; k < max_panels; ++k) {
    const double a = k * width, b = (k + 1) * width;
    const QuadResult p = integrate_adaptive(f, a, b, 0.0, 0.1 * rel_tol, 600, 0.1 * l1_floor);
    res.evaluations += p.evaluations;
    sum = vadd(sum, p.value);
    err += p.error;
    l1 += p.l1;
    const double tol = std::max(rel_tol * vnorm(sum), l1_floor * l1);
    if (vnorm(p.value) <= 1e-3 * tol && p.l1 <= 1e-2 * tol) {
      if (++small_run >= 2 && (sigma == 0 || b * sigma > 2.0)) {
        res.value = sum;
        res.error = err;
        res.l1 = l1;
        res.converged = true;
        return res;
      }
    } else {
      small_run = 0;
    }
    if (r_osc == 0) continue;
    for (int i = 0; i < 4; ++i) seq[i].push_back(sum[i]);
    if (k < 6) continue;
    Vec4 e{};
    double eerr = 0, change = 0;
    for (int i = 0; i < 4; ++i) {
      double ei = 0;
      e[i] = wynn_epsilon(seq[i], &ei);
      eerr = std::max(eerr, ei);
      change = std::max(change, std::abs(e[i] - last[i]));
    }
    last = e;
    const double etol = std::max(rel_tol * vnorm(e), l1_floor * l1);
    if (change <= etol && eerr <= 10 * etol) {
      if (++stable_run >= 3) {
        res.value = e;
        res.error = err + std::max(change, eerr);
        res.l1 = l1;
        res.converged = true;
        return res;
      }
    } else {
      stable_run = 0;
    }
  }
  res.value = sum;
  res.error = std::numeric_limits<double>::infinity();
  res.l1 = l1;
  res.converged = false;
  return res;
}

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  auto fill = [&](const auto& ab, const auto& wt, int npts) {
    x.clear();
    w.clear();
    // boost stores nonnegative abscissae; expand symmetrically
    for (int i = static_cast<int>(ab.size()) - 1; i >= 0; --i) {
      if (ab[i] == 0) continue;
      x.push_back(-ab[i]);
      w.push_back(wt[i]);
    }
    for (std::size_t i = 0; i < ab.size(); ++i) {
      x.push_back(ab[i]);
      w.push_back(wt[i]);
    }
    require(static_cast<int>(x.size()) == npts, "gauss rule size mismatch");
  };
  using namespace boost::math::quadrature;
  switch (n) {
    case 4: fill(gauss<double, 4>::abscissa(), gauss<double, 4>::weights(), 4); break;
    case 8: fill(gauss<double, 8>::abscissa(), gauss<double, 8>::weights(), 8); break;
    case 16: fill(gauss<double, 16>::abscissa(), gauss<double, 16>::weights(), 16); break;
    case 20: fill(gauss<double, 20>::abscissa(), gauss<double, 20>::weights(), 20); break;
    case 32: fill(gauss<double, 32>::abscissa(), gauss<double, 32>::weights(), 32); break;
    default: fail(ErrorCode::invalid_argument, "unsupported Gauss-Legendre order");
  }
}

}  // namespace hs
