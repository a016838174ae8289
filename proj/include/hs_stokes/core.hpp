// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace hs {

using cd = std::complex<double>;
inline constexpr double kPi = 3.14159265358979323846;

enum class ErrorCode : int {
  invalid_argument = 1,
  config = 2,
  numerical = 3,
  not_solenoidal = 4,
  io = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode c, const std::string& msg) { throw Error(c, msg); }
inline void require(bool ok, const std::string& msg) {
  if (!ok) fail(ErrorCode::invalid_argument, msg);
}

// Resolvent parameter in the sector |arg| <= pi - epsilon.
struct SectorPoint {
  double modulus = 1.0;
  double argument = 0.0;
  double epsilon = kPi / 8;

  SectorPoint() = default;
  SectorPoint(double mod, double arg, double eps);
  static SectorPoint from_complex(cd lambda, double eps);
  cd value() const { return std::polar(modulus, argument); }
};

class VerticalBasis;

struct HalfSpaceGrid {
  int dimension = 2;
  double box_length = 2 * kPi;
  int n_tangential = 8;
  std::vector<double> vertical_nodes;
  double grading = 1.0;
  std::shared_ptr<const VerticalBasis> basis;  // built by make_grid*

  int tangential_axes() const { return dimension - 1; }
  std::size_t n_points() const;  // tangential lattice size
  std::size_t n_vertical() const { return vertical_nodes.size(); }
  double height() const { return vertical_nodes.back(); }
  // signed integer k for FFT-ordered index j
  int wave_index(int j) const { return j < n_tangential / 2 ? j : j - n_tangential; }
  double wavenumber(int j) const { return 2 * kPi * wave_index(j) / box_length; }
  // tangential wavevector of flattened mode m (d=2 uses only [0])
  std::array<double, 2> xi(std::size_t m) const;
  std::array<int, 2> split(std::size_t m) const;
  bool is_nyquist(std::size_t m) const;
  std::array<double, 2> point(std::size_t m) const;
  bool same_as(const HalfSpaceGrid& o) const;
};

using GridPtr = std::shared_ptr<const HalfSpaceGrid>;

GridPtr make_grid(int dimension, double box_length, int n_tangential, double height, int n_cells,
                  double grading);
// Same tangential lattice, explicit vertical nodes.
GridPtr make_grid_nodes(int dimension, double box_length, int n_tangential,
                        std::vector<double> nodes);

// Values indexed (component, tangential point, vertical node); vertical is contiguous.
struct GridField {
  GridPtr grid;
  int components = 1;
  std::vector<cd> values;

  GridField() = default;
  GridField(GridPtr g, int comps);
  std::size_t index(int c, std::size_t m, std::size_t k) const {
    return (static_cast<std::size_t>(c) * grid->n_points() + m) * grid->n_vertical() + k;
  }
  cd& at(int c, std::size_t m, std::size_t k) { return values[index(c, m, k)]; }
  const cd& at(int c, std::size_t m, std::size_t k) const { return values[index(c, m, k)]; }
  cd* profile(int c, std::size_t m) { return values.data() + index(c, m, 0); }
  const cd* profile(int c, std::size_t m) const { return values.data() + index(c, m, 0); }
  double max_abs() const;
  double max_imag() const;
};

// Same layout as GridField; tangential index is the FFT-ordered mode.
struct SpectralField {
  GridPtr grid;
  int components = 1;
  std::vector<cd> modal_values;

  SpectralField() = default;
  SpectralField(GridPtr g, int comps);
  std::size_t index(int c, std::size_t m, std::size_t k) const {
    return (static_cast<std::size_t>(c) * grid->n_points() + m) * grid->n_vertical() + k;
  }
  cd& at(int c, std::size_t m, std::size_t k) { return modal_values[index(c, m, k)]; }
  const cd& at(int c, std::size_t m, std::size_t k) const { return modal_values[index(c, m, k)]; }
  cd* profile(int c, std::size_t m) { return modal_values.data() + index(c, m, 0); }
  const cd* profile(int c, std::size_t m) const { return modal_values.data() + index(c, m, 0); }
};

SpectralField to_spectral(const GridField& f);
GridField to_physical(const SpectralField& s);

// Elementwise helpers.
GridField operator+(const GridField& a, const GridField& b);
GridField operator-(const GridField& a, const GridField& b);
GridField operator*(cd s, const GridField& a);
GridField real_part(const GridField& a);
GridField component(const GridField& a, int c);
double relative_gap(const GridField& a, const GridField& b);  // max|a-b| / max|b|

// Pointwise tangential gradient by spectral differentiation; Nyquist dropped.
// Output has components*dim entries, index c*d + j, j = derivative axis (last = vertical).
GridField gradient(const GridField& f);
// Pointwise divergence of a d-vector field.
GridField divergence(const GridField& f);
// Vertical first derivative at the nodes from finite-difference weights on the
// `stencil` nearest nodes (one-sided at the ends).
class WideDerivative {
 public:
  explicit WideDerivative(const std::vector<double>& nodes, int stencil = 7);
  void apply(const cd* src, cd* dst) const;

 private:
  int n_ = 0;
  std::vector<std::size_t> start_;
  std::vector<double> weights_;
};
// Divergence with the wide vertical stencil; a diagnostic for smooth nodal data.
GridField divergence_wide(const GridField& f, int stencil = 7);

// Threads.
void set_thread_count(int n);  // 0 = hardware concurrency
int thread_count();
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace hs
