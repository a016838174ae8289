// SPDX-License-Identifier: Apache-2.0
// Command-line front end over the C API.
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hs_stokes/hs_stokes.h"

namespace {

int threads_from_env() {
  const char* v = std::getenv("HS_STOKES_THREADS");
  if (!v || !*v) return 0;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 0) {
    std::fprintf(stderr, "ignoring HS_STOKES_THREADS='%s'\n", v);
    return 0;
  }
  return static_cast<int>(n);
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> commands;
  for (size_t i = 0; i < hs_command_count(); ++i) commands.emplace_back(hs_command_name(i));

  CLI::App app{"Half-space Stokes resolvent, semigroup and mild Navier-Stokes experiments"};
  app.set_version_flag("--version", hs_version());
  std::string command, config_path, out_dir = "out";
  std::uint64_t seed = 1;
  int threads = -1;
  app.add_option("command", command, "Experiment to run")->required()->check(CLI::IsMember(commands));
  app.add_option("--config", config_path, "JSON configuration file")->required();
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--seed", seed, "Random seed for sample sweeps")->capture_default_str();
  app.add_option("--threads", threads, "Worker threads, 0 = auto (falls back to HS_STOKES_THREADS)")
      ->check(CLI::NonNegativeNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : HS_ERR_CONFIG;
  }

  if (hs_set_threads(threads >= 0 ? threads : threads_from_env()) != HS_OK) {
    std::fprintf(stderr, "error: %s\n", hs_last_error());
    return HS_ERR_CONFIG;
  }
  hs_config* cfg = nullptr;
  if (hs_config_load(config_path.c_str(), &cfg) != HS_OK) {
    std::fprintf(stderr, "config error: %s\n", hs_last_error());
    return HS_ERR_CONFIG;
  }
  hs_run* run = nullptr;
  const hs_status status = hs_run_command(command.c_str(), cfg, out_dir.c_str(), seed, &run);
  if (run) {
    for (size_t i = 0; i < hs_run_verdict_count(run); ++i)
      std::printf("%s %s\n", hs_run_verdict_pass(run, i) ? "PASS" : "FAIL", hs_run_verdict_name(run, i));
    std::printf("%s: %zu outputs in %s (%.1f s)\n", command.c_str(), hs_run_output_count(run), out_dir.c_str(),
                hs_run_wall_time(run));
    if (*hs_run_message(run)) std::fprintf(stderr, "error: %s\n", hs_run_message(run));
  } else {
    std::fprintf(stderr, "error: %s\n", hs_last_error());
  }
  hs_run_free(run);
  hs_config_free(cfg);
  return static_cast<int>(status);
}
