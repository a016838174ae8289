// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "hs_stokes/core.hpp"
#include "hs_stokes/report.hpp"

namespace hs {

// Physical-space kernels of the half-space resolvent.
//   k1      whole-space Dirichlet-Laplace kernel, argument (y', y_d), y_d any sign
//   k2      reflected Dirichlet-Laplace kernel
//   r_prime nonlocal velocity kernel, tangential block ((d-1) x (d-1))
//   r_d     nonlocal velocity kernel, vertical row ((d-1) vector)
//   q       pressure kernel ((d-1) vector)
// All carry the (2 pi)^{-(d-1)} inverse-transform factor.
enum class KernelId { k1, k2, r_prime, r_d, q };

const char* kernel_name(KernelId id);
KernelId parse_kernel(const std::string& name);
int kernel_components(KernelId id, int dimension);

struct KernelDeriv {
  std::array<int, 2> tangential{0, 0};  // derivative count per tangential axis
  int yd = 0;
  int zd = 0;
  int tangential_order() const { return tangential[0] + tangential[1]; }
  int order() const { return tangential_order() + yd + zd; }
};

struct KernelQuery {
  KernelId id = KernelId::k1;
  KernelDeriv deriv;
  int dimension = 3;
  SectorPoint lambda;
  std::array<double, 2> y_prime{0, 0};
  double y_d = 0;
  double z_d = 0;
  double tol = 1e-11;
};

struct KernelValue {
  std::vector<cd> value;  // row-major for r_prime
  double error = 0;
  bool converged = true;
  long evaluations = 0;
};

KernelValue eval_kernel(const KernelQuery& q);

// Right-hand side of the pointwise bound for (kernel, derivative) at the query
// point with unit constant and exponential rate c_decay.
double bound_envelope(KernelId id, const KernelDeriv& deriv, int dimension, cd lambda,
                      std::array<double, 2> y_prime, double y_d, double z_d, double c_decay);
bool has_bound(KernelId id, const KernelDeriv& deriv);

// Relative gap of the |lambda|-rescaling identity at the query point:
//   K_lambda(y) = |lambda|^s K_{lambda/|lambda|}(|lambda|^{1/2} y).
struct ScalingCheck {
  double gap = 0;
  double magnitude = 0;
  bool converged = true;
};
ScalingCheck scaling_gap(const KernelQuery& q);
double scaling_exponent(KernelId id, const KernelDeriv& deriv, int dimension);

struct SamplePlan {
  int dimension = 3;
  std::size_t n_samples = 1000;  // base sample; the stability check doubles it
  double lambda_min = 1e-2, lambda_max = 1e2;
  double epsilon = kPi / 8;
  double radius_min = 1e-2, radius_max = 1e2;
  double tol = 1e-7;
  std::uint64_t seed = 1;
};

// Sup of |D^a K| / envelope over a scrambled Halton sample. The tensor norm runs
// over every tangential split of the given tangential order.
EstimateReport check_bound_ratio(KernelId id, int tangential_order, int yd, int zd,
                                 const SamplePlan& plan);

}  // namespace hs
