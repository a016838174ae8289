// SPDX-License-Identifier: Apache-2.0
#include "hs_stokes/report.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

namespace hs {

Halton::Halton(int dims, std::uint64_t seed) {
  static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  if (dims < 1 || dims > 12) throw std::invalid_argument("Halton supports 1..12 dimensions");
  std::mt19937_64 rng(seed);
  for (int d = 0; d < dims; ++d) {
    const int b = primes[d];
    bases_.push_back(b);
    std::vector<int> p(b);
    std::iota(p.begin(), p.end(), 0);
    // keep 0 fixed so the sequence never hits 1
    std::shuffle(p.begin() + 1, p.end(), rng);
    perms_.push_back(p);
  }
}

std::vector<double> Halton::point(std::uint64_t i) const {
  std::vector<double> x(bases_.size());
  for (std::size_t d = 0; d < bases_.size(); ++d) {
    const int b = bases_[d];
    double f = 1.0, r = 0.0;
    std::uint64_t n = i + 1;
    while (n > 0) {
      f /= b;
      r += f * perms_[d][n % b];
      n /= b;
    }
    x[d] = r;
  }
  return x;
}

BoxMax maximize_in_box(const std::function<double(const std::vector<double>&)>& f,
                       std::vector<double> x0, double step, double min_step, int max_evals) {
  BoxMax r;
  r.x = std::move(x0);
  r.value = f(r.x);
  r.evaluations = 1;
  const std::size_t n = r.x.size();
  while (step >= min_step && r.evaluations < max_evals) {
    bool moved = false;
    for (std::size_t i = 0; i < n && r.evaluations < max_evals; ++i) {
      for (double sgn : {1.0, -1.0}) {
        std::vector<double> t = r.x;
        t[i] = std::clamp(t[i] + sgn * step, 0.0, 1.0 - 1e-12);
        if (t[i] == r.x[i]) continue;
        const double v = f(t);
        ++r.evaluations;
        if (v > r.value) {
          r.value = v;
          r.x = std::move(t);
          moved = true;
          break;
        }
      }
    }
    if (!moved) step *= 0.5;
  }
  return r;
}

}  // namespace hs
