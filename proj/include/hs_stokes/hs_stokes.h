/* SPDX-License-Identifier: Apache-2.0 */
#ifndef HS_STOKES_H
#define HS_STOKES_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define HS_API __declspec(dllexport)
#else
#define HS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. The first four double as process exit codes of the command line. */
typedef enum hs_status {
  HS_OK = 0,
  HS_FAIL = 1,              /* a requested verdict failed */
  HS_ERR_CONFIG = 2,        /* configuration, input or output-path error */
  HS_ERR_NUMERICAL = 3,     /* numerical failure */
  HS_ERR_INVALID_ARGUMENT = 4,
  HS_ERR_NOT_SOLENOIDAL = 5 /* resolvent data rejected by the admissibility checks */
} hs_status;

typedef struct hs_config hs_config;
typedef struct hs_grid hs_grid;
typedef struct hs_field hs_field;
typedef struct hs_run hs_run;

HS_API const char* hs_version(void);
/* Message of the last failing call on this thread; empty when none. */
HS_API const char* hs_last_error(void);

/* Worker threads; 0 = hardware concurrency. */
HS_API hs_status hs_set_threads(int n);
HS_API int hs_threads(void);

/* Configuration */
HS_API hs_status hs_config_load(const char* path, hs_config** out);
HS_API hs_status hs_config_parse(const char* json_text, hs_config** out);
HS_API void hs_config_free(hs_config* cfg);
HS_API uint64_t hs_config_hash(const hs_config* cfg);
/* Canonical JSON into buf (NUL-terminated, truncated to cap); *needed receives the full size. */
HS_API hs_status hs_config_json(const hs_config* cfg, char* buf, size_t cap, size_t* needed);

/* Experiment commands */
HS_API size_t hs_command_count(void);
HS_API const char* hs_command_name(size_t i);
/* Runs a command into out_dir. The return value is the run status (HS_OK, HS_FAIL,
   HS_ERR_CONFIG or HS_ERR_NUMERICAL); *out may be NULL when the details are not needed. */
HS_API hs_status hs_run_command(const char* command, const hs_config* cfg, const char* out_dir, uint64_t seed,
                                hs_run** out);
HS_API hs_status hs_run_status(const hs_run* run);
HS_API size_t hs_run_verdict_count(const hs_run* run);
HS_API const char* hs_run_verdict_name(const hs_run* run, size_t i);
HS_API int hs_run_verdict_pass(const hs_run* run, size_t i);
HS_API size_t hs_run_output_count(const hs_run* run);
HS_API const char* hs_run_output(const hs_run* run, size_t i);
HS_API const char* hs_run_message(const hs_run* run);
HS_API double hs_run_wall_time(const hs_run* run);
HS_API void hs_run_free(hs_run* run);

/* Grids and fields */
HS_API hs_status hs_grid_create(int dimension, double box_length, int n_tangential, double height, int n_cells,
                                double grading, hs_grid** out);
HS_API void hs_grid_free(hs_grid* g);
HS_API size_t hs_grid_vertical_count(const hs_grid* g);
HS_API size_t hs_grid_tangential_count(const hs_grid* g);

/* Catalogue field; params_json is an object of numbers or arrays, may be NULL. */
HS_API hs_status hs_field_sample(const hs_grid* g, const char* name, const char* params_json, hs_field** out);
HS_API void hs_field_free(hs_field* f);
HS_API int hs_field_components(const hs_field* f);
HS_API size_t hs_field_size(const hs_field* f);
/* Copies values in (component, tangential point, vertical node) order; im may be NULL. */
HS_API hs_status hs_field_values(const hs_field* f, double* re, double* im, size_t n);
HS_API double hs_field_max_abs(const hs_field* f);

typedef struct hs_resolvent_diagnostics {
  double pde_residual;
  double div_residual;
  double bc_residual;
  double tail_bound;
} hs_resolvent_diagnostics;

/* Velocity of the Stokes resolvent at lambda = modulus e^{i argument}; diag may be NULL. */
HS_API hs_status hs_resolvent_solve(double modulus, double argument, double epsilon, const hs_field* f,
                                    hs_field** velocity, hs_resolvent_diagnostics* diag);
/* Semigroup at time t through the contour (eta, kappa, Gauss points per panel). */
HS_API hs_status hs_semigroup_apply(double t, const hs_field* f, double eta, double kappa, int n_nodes, double tol,
                                    hs_field** out);
HS_API hs_status hs_project(const hs_field* f, hs_field** out);
/* q < 0 means infinity. */
HS_API hs_status hs_uloc_norm(const hs_field* f, double q, double rho, double* out);

/* Kernel value at one point; writes up to cap complex components, *count receives the total. */
HS_API hs_status hs_kernel_eval(const char* kernel, int dimension, double modulus, double argument, double epsilon,
                                const double y_prime[2], double y_d, double z_d, const int deriv[4], double* re,
                                double* im, size_t cap, size_t* count);

HS_API hs_status hs_existence_horizon(double u0_norm, double q, int dimension, double gamma, double* out);

#ifdef __cplusplus
}
#endif

#endif
