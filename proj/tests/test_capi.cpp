// SPDX-License-Identifier: Apache-2.0
// Exercises the shared library through its C interface only.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "doctest.h"
#include "hs_stokes/hs_stokes.h"

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

const char* kConfig = R"({
  "dimension": 2,
  "grid": {"box_length": 8.0, "n_tangential": 8, "height": 16.0, "n_cells": 120, "grading": 1.03},
  "lambda": {"modulus": 1.0, "argument": 0.3, "epsilon": 0.39269908169872414},
  "contour": {"eta": 2.356194490192345, "kappa": 0.5, "n_nodes": 8},
  "ns": {"horizon": 0.5, "time_steps": 4, "q": 2.0, "rho": 1.0, "gamma": 0.0, "max_sweeps": 30},
  "tolerances": {"quadrature": 1e-10, "fixed_point": 1e-8, "residual": 1e-4},
  "field": {"name": "random_solenoidal", "seed": 100, "modes": 2, "ell": 0.5, "uloc_norm": UNORM},
  "sweep": {"n_samples": 20, "lambda_min": 0.1, "lambda_max": 10.0, "radius_min": 0.1, "radius_max": 10.0,
            "t_min": 0.1, "t_max": 1.0, "n_points": 5, "trials": 1, "exponents": [[2, 2]]}
})";

std::string config_text(double uloc_norm) {
  std::string s = kConfig;
  s.replace(s.find("UNORM"), 5, std::to_string(uloc_norm));
  return s;
}

hs_config* parse(const std::string& text) {
  hs_config* c = nullptr;
  REQUIRE(hs_config_parse(text.c_str(), &c) == HS_OK);
  return c;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("hs_capi_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("capi: version, commands and null arguments") {
  CHECK(std::string(hs_version()) == "1.0.0");
  std::vector<std::string> names;
  for (size_t i = 0; i < hs_command_count(); ++i) names.emplace_back(hs_command_name(i));
  CHECK(names == std::vector<std::string>{"resolvent", "semigroup", "ns-mild", "verify-kernels", "verify-estimates",
                                          "verify-liouville"});
  CHECK(hs_command_name(names.size()) == nullptr);
  CHECK(hs_config_parse(nullptr, nullptr) == HS_ERR_INVALID_ARGUMENT);
  CHECK(std::string(hs_last_error()).find("null") != std::string::npos);
  CHECK(hs_set_threads(-1) == HS_ERR_INVALID_ARGUMENT);
}

TEST_CASE("capi: malformed configurations") {
  hs_config* c = nullptr;
  std::string text = config_text(1.0);
  const auto at = text.find("\"lambda\"");
  text.erase(at, text.find('\n', at) - at + 1);
  CHECK(hs_config_parse(text.c_str(), &c) == HS_ERR_CONFIG);
  CHECK(c == nullptr);
  CHECK(std::string(hs_last_error()).find("lambda") != std::string::npos);
  CHECK(hs_config_parse("{not json", &c) == HS_ERR_CONFIG);
  CHECK(hs_config_load("/nonexistent/config.json", &c) == HS_ERR_CONFIG);
}

TEST_CASE("capi: config hash and canonical JSON") {
  hs_config* a = parse(config_text(1.0));
  hs_config* b = parse(config_text(2.0));
  CHECK(hs_config_hash(a) != hs_config_hash(b));
  size_t needed = 0;
  REQUIRE(hs_config_json(a, nullptr, 0, &needed) == HS_OK);
  std::string buf(needed, '\0');
  REQUIRE(hs_config_json(a, buf.data(), buf.size(), nullptr) == HS_OK);
  buf.pop_back();
  hs_config* round = parse(buf);
  CHECK(hs_config_hash(round) == hs_config_hash(a));
  hs_config_free(round);
  hs_config_free(a);
  hs_config_free(b);
}

TEST_CASE("capi: oversized ns-mild data fails with a diverging log") {
  hs_config* c = parse(config_text(40.0));
  const fs::path dir = scratch("oversized");
  hs_run* run = nullptr;
  CHECK(hs_run_command("ns-mild", c, dir.c_str(), 1, &run) == HS_FAIL);
  REQUIRE(run != nullptr);
  CHECK(hs_run_status(run) == HS_FAIL);
  bool picard_failed = false;
  for (size_t i = 0; i < hs_run_verdict_count(run); ++i)
    if (std::string(hs_run_verdict_name(run, i)) == "picard") picard_failed = !hs_run_verdict_pass(run, i);
  CHECK(picard_failed);
  CHECK(slurp(dir / "contraction_log.csv").find("DIVERGED") != std::string::npos);
  hs_run_free(run);
  hs_config_free(c);
  fs::remove_all(dir);
}

TEST_CASE("capi: runs are byte-identical across thread counts") {
  hs_config* c = parse(config_text(1.0));
  const fs::path root = scratch("determinism");
  for (const char* cmd : {"ns-mild", "verify-liouville"}) {
    std::vector<std::string> outputs;
    for (int threads : {1, 3}) {
      REQUIRE(hs_set_threads(threads) == HS_OK);
      CHECK(hs_threads() == threads);
      hs_run* run = nullptr;
      const fs::path dir = root / (std::string(cmd) + std::to_string(threads));
      CHECK(hs_run_command(cmd, c, dir.c_str(), 5, &run) == HS_OK);
      outputs.clear();
      for (size_t i = 0; i < hs_run_output_count(run); ++i) outputs.emplace_back(hs_run_output(run, i));
      hs_run_free(run);
    }
    REQUIRE(!outputs.empty());
    for (const auto& name : outputs)
      CHECK_MESSAGE(slurp(root / (std::string(cmd) + "1") / name) == slurp(root / (std::string(cmd) + "3") / name),
                    name);
  }
  hs_set_threads(0);
  hs_config_free(c);
  fs::remove_all(root);
}

TEST_CASE("capi: grid, field, projection, resolvent and norms") {
  hs_grid* g = nullptr;
  REQUIRE(hs_grid_create(2, 8.0, 8, 16.0, 120, 1.03, &g) == HS_OK);
  CHECK(hs_grid_tangential_count(g) == 8);
  hs_field* f = nullptr;
  REQUIRE(hs_field_sample(g, "random_solenoidal", R"({"seed": 4, "modes": 2})", &f) == HS_OK);
  CHECK(hs_field_components(f) == 2);
  CHECK(hs_field_size(f) == 2 * 8 * hs_grid_vertical_count(g));
  std::vector<double> re(hs_field_size(f));
  CHECK(hs_field_values(f, re.data(), nullptr, re.size()) == HS_OK);
  CHECK(hs_field_values(f, re.data(), nullptr, 1) == HS_ERR_INVALID_ARGUMENT);

  hs_field* p = nullptr;
  REQUIRE(hs_project(f, &p) == HS_OK);
  CHECK(hs_field_max_abs(p) == doctest::Approx(hs_field_max_abs(f)).epsilon(1e-6));

  hs_field* u = nullptr;
  hs_resolvent_diagnostics diag{};
  REQUIRE(hs_resolvent_solve(1e4, 0.0, 0.3, f, &u, &diag) == HS_OK);
  CHECK(1e4 * hs_field_max_abs(u) == doctest::Approx(hs_field_max_abs(f)).epsilon(0.05));
  CHECK(diag.bc_residual <= 1e-8);

  hs_field* bad = nullptr;
  REQUIRE(hs_field_sample(g, "gaussian_bump", R"({"components": 2})", &bad) == HS_OK);
  hs_field* none = nullptr;
  CHECK(hs_resolvent_solve(1.0, 0.0, 0.3, bad, &none, nullptr) == HS_ERR_NOT_SOLENOIDAL);
  CHECK(none == nullptr);
  CHECK(hs_field_sample(g, "gaussian_bump", "[1]", &none) == HS_ERR_CONFIG);

  double norm = 0;
  CHECK(hs_uloc_norm(f, 2.0, 1.0, &norm) == HS_OK);
  CHECK(norm > 0);
  hs_field* s = nullptr;
  REQUIRE(hs_semigroup_apply(0.5, f, 2.356194490192345, 0.5, 8, 1e-10, &s) == HS_OK);
  CHECK(hs_field_max_abs(s) < hs_field_max_abs(f));

  for (hs_field* x : {f, p, u, bad, s}) hs_field_free(x);
  hs_grid_free(g);
}

TEST_CASE("capi: kernel value and existence horizon") {
  const double yp[2] = {0.0, 0.0};
  double re[1] = {0}, im[1] = {0};
  size_t count = 0;
  REQUIRE(hs_kernel_eval("k1", 3, 1.0, 0.0, 0.3, yp, 1.0, 0.0, nullptr, re, im, 1, &count) == HS_OK);
  CHECK(count == 1);
  CHECK(re[0] == doctest::Approx(std::exp(-1.0) / (4 * M_PI)).epsilon(1e-10));
  CHECK(hs_kernel_eval("nope", 3, 1.0, 0.0, 0.3, yp, 1.0, 0.0, nullptr, re, im, 1, &count) != HS_OK);
  double T = 0;
  REQUIRE(hs_existence_horizon(1.0, 2.0, 2, 3.0, &T) == HS_OK);
  CHECK(T == doctest::Approx(2.0));
}
