// SPDX-License-Identifier: Apache-2.0
#include "hs_stokes/core.hpp"

#include <fftw3.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "hs_stokes/vertical.hpp"

namespace hs {

SectorPoint::SectorPoint(double mod, double arg, double eps) : modulus(mod), argument(arg), epsilon(eps) {
  require(eps > 0 && eps < kPi, "sector margin epsilon must lie in (0, pi)");
  require(mod > 0 && std::isfinite(mod), "lambda modulus must be positive");
  require(std::abs(arg) <= kPi - eps + 1e-12, "lambda lies outside the sector |arg| <= pi - epsilon");
}

SectorPoint SectorPoint::from_complex(cd lambda, double eps) {
  return SectorPoint(std::abs(lambda), std::arg(lambda), eps);
}

std::size_t HalfSpaceGrid::n_points() const {
  return dimension == 2 ? static_cast<std::size_t>(n_tangential)
                        : static_cast<std::size_t>(n_tangential) * n_tangential;
}

std::array<int, 2> HalfSpaceGrid::split(std::size_t m) const {
  if (dimension == 2) return {static_cast<int>(m), 0};
  return {static_cast<int>(m / n_tangential), static_cast<int>(m % n_tangential)};
}

std::array<double, 2> HalfSpaceGrid::xi(std::size_t m) const {
  const auto ij = split(m);
  if (dimension == 2) return {wavenumber(ij[0]), 0.0};
  return {wavenumber(ij[0]), wavenumber(ij[1])};
}

bool HalfSpaceGrid::is_nyquist(std::size_t m) const {
  const auto ij = split(m);
  const int h = n_tangential / 2;
  if (ij[0] == h) return true;
  return dimension == 3 && ij[1] == h;
}

std::array<double, 2> HalfSpaceGrid::point(std::size_t m) const {
  const auto ij = split(m);
  const double dx = box_length / n_tangential;
  if (dimension == 2) return {ij[0] * dx, 0.0};
  return {ij[0] * dx, ij[1] * dx};
}

bool HalfSpaceGrid::same_as(const HalfSpaceGrid& o) const {
  return dimension == o.dimension && box_length == o.box_length && n_tangential == o.n_tangential &&
         vertical_nodes == o.vertical_nodes;
}

namespace {

void check_lattice(int dimension, double box_length, int n_tangential) {
  require(dimension == 2 || dimension == 3, "dimension must be 2 or 3");
  require(n_tangential % 2 == 0, "n_tangential must be even");
  require(n_tangential >= 4, "n_tangential must be at least 4");
  require(box_length > 0 && std::isfinite(box_length), "box_length must be positive");
}

}  // namespace

GridPtr make_grid(int dimension, double box_length, int n_tangential, double height, int n_cells,
                  double grading) {
  check_lattice(dimension, box_length, n_tangential);
  require(height > 0 && std::isfinite(height), "height must be positive");
  require(n_cells >= 2, "n_cells must be at least 2");
  require(grading >= 1.0 && std::isfinite(grading), "grading must be >= 1");
  std::vector<double> nodes(n_cells + 1);
  nodes[0] = 0.0;
  if (grading == 1.0) {
    for (int i = 1; i <= n_cells; ++i) nodes[i] = height * i / n_cells;
  } else {
    const double h0 = height * (grading - 1.0) / (std::pow(grading, n_cells) - 1.0);
    double h = h0;
    for (int i = 1; i <= n_cells; ++i) {
      nodes[i] = nodes[i - 1] + h;
      h *= grading;
    }
  }
  nodes[n_cells] = height;
  auto g = std::make_shared<HalfSpaceGrid>();
  g->dimension = dimension;
  g->box_length = box_length;
  g->n_tangential = n_tangential;
  g->vertical_nodes = std::move(nodes);
  g->grading = grading;
  g->basis = std::make_shared<VerticalBasis>(g->vertical_nodes);
  return g;
}

GridPtr make_grid_nodes(int dimension, double box_length, int n_tangential, std::vector<double> nodes) {
  check_lattice(dimension, box_length, n_tangential);
  require(nodes.size() >= 3, "need at least two vertical cells");
  require(nodes[0] == 0.0, "vertical nodes must start at 0");
  for (std::size_t i = 1; i < nodes.size(); ++i)
    require(nodes[i] > nodes[i - 1], "vertical nodes must be strictly increasing");
  auto g = std::make_shared<HalfSpaceGrid>();
  g->dimension = dimension;
  g->box_length = box_length;
  g->n_tangential = n_tangential;
  g->vertical_nodes = std::move(nodes);
  g->grading = 1.0;
  g->basis = std::make_shared<VerticalBasis>(g->vertical_nodes);
  return g;
}

GridField::GridField(GridPtr g, int comps) : grid(std::move(g)), components(comps) {
  values.assign(static_cast<std::size_t>(comps) * grid->n_points() * grid->n_vertical(), cd{0, 0});
}

SpectralField::SpectralField(GridPtr g, int comps) : grid(std::move(g)), components(comps) {
  modal_values.assign(static_cast<std::size_t>(comps) * grid->n_points() * grid->n_vertical(), cd{0, 0});
}

double GridField::max_abs() const {
  double m = 0;
  for (const auto& v : values) m = std::max(m, std::abs(v));
  return m;
}

double GridField::max_imag() const {
  double m = 0;
  for (const auto& v : values) m = std::max(m, std::abs(v.imag()));
  return m;
}

// ---- FFT -------------------------------------------------------------------

namespace {

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

// Plan transforming all vertical nodes of one component at once.
fftw_plan get_plan(int dimension, int n, int n_vert, int sign) {
  static std::map<std::tuple<int, int, int, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(plan_mutex());
  const auto key = std::make_tuple(dimension, n, n_vert, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  const int rank = dimension - 1;
  int dims[2] = {n, n};
  const int total = dimension == 2 ? n : n * n;
  std::vector<fftw_complex> buf(static_cast<std::size_t>(total) * n_vert);
  std::vector<fftw_complex> obuf(buf.size());
  fftw_plan p = fftw_plan_many_dft(rank, dims, n_vert, buf.data(), nullptr, n_vert, 1, obuf.data(), nullptr,
                                   n_vert, 1, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!p) fail(ErrorCode::numerical, "FFT plan creation failed");
  cache.emplace(key, p);
  return p;
}

void check_finite(const std::vector<cd>& v) {
  for (const auto& x : v) {
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
      fail(ErrorCode::invalid_argument, "field contains non-finite entries");
  }
}

}  // namespace

SpectralField to_spectral(const GridField& f) {
  check_finite(f.values);
  SpectralField s(f.grid, f.components);
  const auto& g = *f.grid;
  const int nv = static_cast<int>(g.n_vertical());
  fftw_plan p = get_plan(g.dimension, g.n_tangential, nv, FFTW_FORWARD);
  const std::size_t block = g.n_points() * g.n_vertical();
  const double scale = 1.0 / static_cast<double>(g.n_points());
  for (int c = 0; c < f.components; ++c) {
    auto* in = reinterpret_cast<fftw_complex*>(const_cast<cd*>(f.values.data() + c * block));
    auto* out = reinterpret_cast<fftw_complex*>(s.modal_values.data() + c * block);
    fftw_execute_dft(p, in, out);
  }
  for (auto& v : s.modal_values) v *= scale;
  return s;
}

GridField to_physical(const SpectralField& s) {
  check_finite(s.modal_values);
  GridField f(s.grid, s.components);
  const auto& g = *s.grid;
  const int nv = static_cast<int>(g.n_vertical());
  fftw_plan p = get_plan(g.dimension, g.n_tangential, nv, FFTW_BACKWARD);
  const std::size_t block = g.n_points() * g.n_vertical();
  for (int c = 0; c < s.components; ++c) {
    auto* in = reinterpret_cast<fftw_complex*>(const_cast<cd*>(s.modal_values.data() + c * block));
    auto* out = reinterpret_cast<fftw_complex*>(f.values.data() + c * block);
    fftw_execute_dft(p, in, out);
  }
  return f;
}

// ---- elementwise -----------------------------------------------------------

namespace {
void same_shape(const GridField& a, const GridField& b) {
  require(a.grid && b.grid && a.grid->same_as(*b.grid) && a.components == b.components,
          "field shapes differ");
}
}  // namespace

GridField operator+(const GridField& a, const GridField& b) {
  same_shape(a, b);
  GridField r = a;
  for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] += b.values[i];
  return r;
}

GridField operator-(const GridField& a, const GridField& b) {
  same_shape(a, b);
  GridField r = a;
  for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] -= b.values[i];
  return r;
}

GridField operator*(cd s, const GridField& a) {
  GridField r = a;
  for (auto& v : r.values) v *= s;
  return r;
}

GridField real_part(const GridField& a) {
  GridField r = a;
  for (auto& v : r.values) v = v.real();
  return r;
}

GridField component(const GridField& a, int c) {
  require(c >= 0 && c < a.components, "component index out of range");
  GridField r(a.grid, 1);
  const std::size_t block = a.grid->n_points() * a.grid->n_vertical();
  std::copy(a.values.begin() + c * block, a.values.begin() + (c + 1) * block, r.values.begin());
  return r;
}

double relative_gap(const GridField& a, const GridField& b) {
  same_shape(a, b);
  double num = 0, den = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    num = std::max(num, std::abs(a.values[i] - b.values[i]));
    den = std::max(den, std::abs(b.values[i]));
  }
  return den > 0 ? num / den : num;
}

GridField gradient(const GridField& f) {
  const auto& g = *f.grid;
  const int d = g.dimension;
  const std::size_t nv = g.n_vertical();
  SpectralField s = to_spectral(f);
  SpectralField ds(f.grid, f.components * d);
  for (int c = 0; c < f.components; ++c) {
    for (std::size_t m = 0; m < g.n_points(); ++m) {
      const auto xi = g.xi(m);
      const bool nyq = g.is_nyquist(m);
      const cd* src = s.profile(c, m);
      for (int j = 0; j < d - 1; ++j) {
        cd* dst = ds.profile(c * d + j, m);
        const cd fac = nyq ? cd(0) : cd(0, xi[j]);
        for (std::size_t k = 0; k < nv; ++k) dst[k] = fac * src[k];
      }
      g.basis->derivative(src, ds.profile(c * d + d - 1, m));
      if (nyq) {
        cd* dst = ds.profile(c * d + d - 1, m);
        for (std::size_t k = 0; k < nv; ++k) dst[k] = 0;
      }
    }
  }
  return to_physical(ds);
}

GridField divergence(const GridField& f) {
  const int d = f.grid->dimension;
  require(f.components == d, "divergence needs a d-vector field");
  GridField gr = gradient(f);
  GridField out(f.grid, 1);
  for (int c = 0; c < d; ++c) {
    const std::size_t block = f.grid->n_points() * f.grid->n_vertical();
    const cd* src = gr.values.data() + (c * d + c) * block;
    for (std::size_t i = 0; i < block; ++i) out.values[i] += src[i];
  }
  return out;
}

namespace {

// Fornberg weights of the first derivative at x0 on the nodes x.
std::vector<double> fd_weights(double x0, const double* x, int n) {
  std::vector<double> c(2 * n, 0.0);  // c[j*2 + m], m = derivative order 0..1
  double c1 = 1, c4 = x[0] - x0;
  c[0] = 1;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, 1);
    double c2 = 1;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i * 2 + k] = c1 * (k * c[(i - 1) * 2 + k - 1] - c5 * c[(i - 1) * 2 + k]) / c2;
        c[i * 2] = -c1 * c5 * c[(i - 1) * 2] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j * 2 + k] = (c4 * c[j * 2 + k] - k * c[j * 2 + k - 1]) / c3;
      c[j * 2] = c4 * c[j * 2] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int j = 0; j < n; ++j) w[j] = c[j * 2 + 1];
  return w;
}

}  // namespace

WideDerivative::WideDerivative(const std::vector<double>& nodes, int stencil) {
  const std::size_t nv = nodes.size();
  n_ = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(stencil), nv));
  start_.resize(nv);
  weights_.resize(nv * n_);
  for (std::size_t k = 0; k < nv; ++k) {
    const std::ptrdiff_t s0 = std::clamp<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(k) - n_ / 2, 0,
                                                         static_cast<std::ptrdiff_t>(nv) - n_);
    start_[k] = static_cast<std::size_t>(s0);
    const auto w = fd_weights(nodes[k], nodes.data() + s0, n_);
    std::copy(w.begin(), w.end(), weights_.begin() + k * n_);
  }
}

void WideDerivative::apply(const cd* src, cd* dst) const {
  for (std::size_t k = 0; k < start_.size(); ++k) {
    cd acc = 0;
    const double* w = weights_.data() + k * n_;
    for (int i = 0; i < n_; ++i) acc += w[i] * src[start_[k] + i];
    dst[k] = acc;
  }
}

GridField divergence_wide(const GridField& f, int stencil) {
  const auto& g = *f.grid;
  const int d = g.dimension;
  require(f.components == d, "divergence needs a d-vector field");
  const std::size_t nv = g.n_vertical();
  const WideDerivative D(g.vertical_nodes, stencil);
  const SpectralField s = to_spectral(f);
  SpectralField out(f.grid, 1);
  std::vector<cd> dz(nv);
  for (std::size_t m = 0; m < g.n_points(); ++m) {
    if (g.is_nyquist(m)) continue;
    const auto xi = g.xi(m);
    cd* dst = out.profile(0, m);
    for (int j = 0; j < d - 1; ++j) {
      const cd* src = s.profile(j, m);
      for (std::size_t k = 0; k < nv; ++k) dst[k] += cd(0, xi[j]) * src[k];
    }
    D.apply(s.profile(d - 1, m), dz.data());
    for (std::size_t k = 0; k < nv; ++k) dst[k] += dz[k];
  }
  return to_physical(out);
}

// ---- threads ---------------------------------------------------------------

namespace {
std::atomic<int> g_threads{0};
}

void set_thread_count(int n) { g_threads.store(n < 0 ? 0 : n); }

int thread_count() {
  int n = g_threads.load();
  if (n <= 0) n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t nt = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), n);
  if (nt <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex err_m;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_m);
        if (!err) err = std::current_exception();
        next.store(n);
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < nt; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace hs
