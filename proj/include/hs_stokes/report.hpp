// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace hs {

enum class Verdict { pass, fail };
inline const char* verdict_name(Verdict v) { return v == Verdict::pass ? "PASS" : "FAIL"; }

// Fitted constant of an inequality over a sample sweep.
struct EstimateReport {
  std::string estimate_id;
  std::size_t samples = 0;
  double fitted_constant = 0;
  double stability_ratio = 1;  // constant on the doubled sample / constant on the base sample
  double shape_residual = 0;   // relative change of the constant when the sweep is widened
  Verdict verdict = Verdict::fail;
  std::vector<std::string> excluded_points;
  std::vector<std::pair<std::string, double>> extras;
  // tidy per-sample table
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  double extra(const std::string& key, double fallback = 0) const {
    for (const auto& [k, v] : extras)
      if (k == key) return v;
    return fallback;
  }
};

// Scrambled Halton sequence: radical inverse with a seeded digit permutation per base.
class Halton {
 public:
  Halton(int dims, std::uint64_t seed);
  // point i (0-based) in [0,1)^dims
  std::vector<double> point(std::uint64_t i) const;

 private:
  std::vector<int> bases_;
  std::vector<std::vector<int>> perms_;
};

struct BoxMax {
  std::vector<double> x;
  double value = 0;
  int evaluations = 0;
};
// Compass search for a local maximum of f on [0,1]^n starting at x0.
BoxMax maximize_in_box(const std::function<double(const std::vector<double>&)>& f,
                       std::vector<double> x0, double step, double min_step, int max_evals);

}  // namespace hs
