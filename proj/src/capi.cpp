// SPDX-License-Identifier: Apache-2.0
#include "hs_stokes/hs_stokes.h"

#include <cstring>
#include <string>

#include "hs_stokes/config.hpp"
#include "hs_stokes/fields.hpp"
#include "hs_stokes/kernels.hpp"
#include "hs_stokes/leray.hpp"
#include "hs_stokes/mild_ns.hpp"
#include "hs_stokes/resolvent.hpp"
#include "hs_stokes/runner.hpp"
#include "hs_stokes/semigroup.hpp"
#include "hs_stokes/uloc.hpp"
#include "json.hpp"

struct hs_config {
  hs::SolverConfig cfg;
};
struct hs_grid {
  hs::GridPtr g;
};
struct hs_field {
  hs::GridField f;
};
struct hs_run {
  hs::RunResult r;
};

namespace {

thread_local std::string last_error;

hs_status status_of(hs::ErrorCode c) {
  switch (c) {
    case hs::ErrorCode::config:
    case hs::ErrorCode::io: return HS_ERR_CONFIG;
    case hs::ErrorCode::numerical: return HS_ERR_NUMERICAL;
    case hs::ErrorCode::not_solenoidal: return HS_ERR_NOT_SOLENOIDAL;
    case hs::ErrorCode::invalid_argument: return HS_ERR_INVALID_ARGUMENT;
  }
  return HS_ERR_NUMERICAL;
}

// Runs fn, translating exceptions into status codes and the thread-local message.
template <class F>
hs_status guarded(F&& fn) {
  last_error.clear();
  try {
    fn();
    return HS_OK;
  } catch (const hs::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    last_error = e.what();
    return HS_ERR_NUMERICAL;
  }
}

hs_status null_argument(const char* what) {
  last_error = std::string("null argument: ") + what;
  return HS_ERR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* hs_version(void) { return hs::kToolVersion; }
const char* hs_last_error(void) { return last_error.c_str(); }

hs_status hs_set_threads(int n) {
  return guarded([&] {
    hs::require(n >= 0, "thread count must be nonnegative");
    hs::set_thread_count(n);
  });
}
int hs_threads(void) { return hs::thread_count(); }

hs_status hs_config_load(const char* path, hs_config** out) {
  if (!path || !out) return null_argument("path/out");
  *out = nullptr;
  return guarded([&] { *out = new hs_config{hs::load_config(path)}; });
}

hs_status hs_config_parse(const char* text, hs_config** out) {
  if (!text || !out) return null_argument("text/out");
  *out = nullptr;
  return guarded([&] { *out = new hs_config{hs::parse_config(text)}; });
}

void hs_config_free(hs_config* cfg) { delete cfg; }

uint64_t hs_config_hash(const hs_config* cfg) { return cfg ? hs::config_hash(cfg->cfg) : 0; }

hs_status hs_config_json(const hs_config* cfg, char* buf, size_t cap, size_t* needed) {
  if (!cfg) return null_argument("cfg");
  return guarded([&] {
    const std::string s = hs::config_to_json(cfg->cfg);
    if (needed) *needed = s.size() + 1;
    if (buf && cap > 0) {
      const size_t n = std::min(cap - 1, s.size());
      std::memcpy(buf, s.data(), n);
      buf[n] = '\0';
    }
  });
}

size_t hs_command_count(void) { return hs::run_commands().size(); }

const char* hs_command_name(size_t i) {
  static const std::vector<std::string> names = hs::run_commands();
  return i < names.size() ? names[i].c_str() : nullptr;
}

hs_status hs_run_command(const char* command, const hs_config* cfg, const char* out_dir, uint64_t seed,
                         hs_run** out) {
  if (out) *out = nullptr;
  if (!command || !cfg || !out_dir) return null_argument("command/cfg/out_dir");
  last_error.clear();
  hs_run* run = nullptr;
  try {
    run = new hs_run{hs::run_command(command, cfg->cfg, out_dir, seed)};
  } catch (const std::exception& e) {
    last_error = e.what();
    return HS_ERR_NUMERICAL;
  }
  last_error = run->r.message;
  const hs_status s = static_cast<hs_status>(static_cast<int>(run->r.status));
  if (out)
    *out = run;
  else
    delete run;
  return s;
}

hs_status hs_run_status(const hs_run* run) {
  return run ? static_cast<hs_status>(static_cast<int>(run->r.status)) : HS_ERR_INVALID_ARGUMENT;
}
size_t hs_run_verdict_count(const hs_run* run) { return run ? run->r.verdicts.size() : 0; }
const char* hs_run_verdict_name(const hs_run* run, size_t i) {
  return run && i < run->r.verdicts.size() ? run->r.verdicts[i].first.c_str() : nullptr;
}
int hs_run_verdict_pass(const hs_run* run, size_t i) {
  return run && i < run->r.verdicts.size() && run->r.verdicts[i].second == hs::Verdict::pass;
}
size_t hs_run_output_count(const hs_run* run) { return run ? run->r.outputs.size() : 0; }
const char* hs_run_output(const hs_run* run, size_t i) {
  return run && i < run->r.outputs.size() ? run->r.outputs[i].c_str() : nullptr;
}
const char* hs_run_message(const hs_run* run) { return run ? run->r.message.c_str() : ""; }
double hs_run_wall_time(const hs_run* run) { return run ? run->r.wall_time : 0.0; }
void hs_run_free(hs_run* run) { delete run; }

hs_status hs_grid_create(int dimension, double box_length, int n_tangential, double height, int n_cells,
                         double grading, hs_grid** out) {
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded(
      [&] { *out = new hs_grid{hs::make_grid(dimension, box_length, n_tangential, height, n_cells, grading)}; });
}
void hs_grid_free(hs_grid* g) { delete g; }
size_t hs_grid_vertical_count(const hs_grid* g) { return g ? g->g->n_vertical() : 0; }
size_t hs_grid_tangential_count(const hs_grid* g) { return g ? g->g->n_points() : 0; }

hs_status hs_field_sample(const hs_grid* g, const char* name, const char* params_json, hs_field** out) {
  if (!g || !name || !out) return null_argument("grid/name/out");
  *out = nullptr;
  return guarded([&] {
    hs::FieldSpec spec;
    spec.name = name;
    if (params_json && *params_json) {
      const auto j = nlohmann::json::parse(params_json, nullptr, false);
      if (j.is_discarded() || !j.is_object()) hs::fail(hs::ErrorCode::config, "field parameters must be a JSON object");
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.value().is_number()) {
          spec.params[it.key()] = {it.value().get<double>()};
        } else if (it.value().is_array()) {
          std::vector<double> v;
          for (const auto& e : it.value()) {
            if (!e.is_number()) hs::fail(hs::ErrorCode::config, "field parameter '" + it.key() + "' must hold numbers");
            v.push_back(e.get<double>());
          }
          spec.params[it.key()] = v;
        } else {
          hs::fail(hs::ErrorCode::config, "field parameter '" + it.key() + "' must be a number or array");
        }
      }
    }
    *out = new hs_field{hs::sample_field(g->g, spec)};
  });
}
void hs_field_free(hs_field* f) { delete f; }
int hs_field_components(const hs_field* f) { return f ? f->f.components : 0; }
size_t hs_field_size(const hs_field* f) { return f ? f->f.values.size() : 0; }

hs_status hs_field_values(const hs_field* f, double* re, double* im, size_t n) {
  if (!f || !re) return null_argument("field/re");
  if (n < f->f.values.size()) {
    last_error = "buffer too small";
    return HS_ERR_INVALID_ARGUMENT;
  }
  for (size_t i = 0; i < f->f.values.size(); ++i) {
    re[i] = f->f.values[i].real();
    if (im) im[i] = f->f.values[i].imag();
  }
  return HS_OK;
}

double hs_field_max_abs(const hs_field* f) { return f ? f->f.max_abs() : 0.0; }

hs_status hs_resolvent_solve(double modulus, double argument, double epsilon, const hs_field* f,
                             hs_field** velocity, hs_resolvent_diagnostics* diag) {
  if (!f || !velocity) return null_argument("field/velocity");
  *velocity = nullptr;
  return guarded([&] {
    auto sol = hs::solve_resolvent(hs::SectorPoint(modulus, argument, epsilon), f->f);
    if (diag) {
      diag->pde_residual = sol.diagnostics.pde_residual;
      diag->div_residual = sol.diagnostics.div_residual;
      diag->bc_residual = sol.diagnostics.bc_residual;
      diag->tail_bound = sol.diagnostics.tail_bound;
    }
    *velocity = new hs_field{std::move(sol.u)};
  });
}

hs_status hs_semigroup_apply(double t, const hs_field* f, double eta, double kappa, int n_nodes, double tol,
                             hs_field** out) {
  if (!f || !out) return null_argument("field/out");
  *out = nullptr;
  return guarded([&] {
    const auto c = hs::build_contour(t, eta, kappa, n_nodes, tol);
    *out = new hs_field{hs::apply_semigroup(t, f->f, c)};
  });
}

hs_status hs_project(const hs_field* f, hs_field** out) {
  if (!f || !out) return null_argument("field/out");
  *out = nullptr;
  return guarded([&] { *out = new hs_field{hs::project(f->f)}; });
}

hs_status hs_uloc_norm(const hs_field* f, double q, double rho, double* out) {
  if (!f || !out) return null_argument("field/out");
  return guarded([&] { *out = hs::uloc_norm(f->f, {q, rho}); });
}

hs_status hs_kernel_eval(const char* kernel, int dimension, double modulus, double argument, double epsilon,
                         const double y_prime[2], double y_d, double z_d, const int deriv[4], double* re, double* im,
                         size_t cap, size_t* count) {
  if (!kernel || !y_prime) return null_argument("kernel/y_prime");
  return guarded([&] {
    hs::KernelQuery q;
    q.id = hs::parse_kernel(kernel);
    q.dimension = dimension;
    q.lambda = hs::SectorPoint(modulus, argument, epsilon);
    q.y_prime = {y_prime[0], y_prime[1]};
    q.y_d = y_d;
    q.z_d = z_d;
    if (deriv) {
      q.deriv.tangential = {deriv[0], deriv[1]};
      q.deriv.yd = deriv[2];
      q.deriv.zd = deriv[3];
    }
    const auto v = hs::eval_kernel(q);
    if (!v.converged) hs::fail(hs::ErrorCode::numerical, "kernel quadrature did not converge");
    if (count) *count = v.value.size();
    for (size_t i = 0; i < v.value.size() && i < cap; ++i) {
      if (re) re[i] = v.value[i].real();
      if (im) im[i] = v.value[i].imag();
    }
  });
}

hs_status hs_existence_horizon(double u0_norm, double q, int dimension, double gamma, double* out) {
  if (!out) return null_argument("out");
  return guarded([&] { *out = hs::existence_horizon(u0_norm, q, dimension, gamma); });
}

}  // extern "C"
