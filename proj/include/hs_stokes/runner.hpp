// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hs_stokes/config.hpp"
#include "hs_stokes/report.hpp"

namespace hs {

inline constexpr const char* kToolVersion = "1.0.0";

// Exit statuses shared by the runner, the C API and the command line.
enum class RunStatus : int { pass = 0, fail = 1, config_error = 2, numerical_failure = 3 };

struct RunResult {
  RunStatus status = RunStatus::pass;
  std::vector<std::pair<std::string, Verdict>> verdicts;  // in evaluation order
  std::vector<std::string> outputs;                       // file names relative to the output directory
  std::string message;                                    // error text for statuses 2 and 3
  double wall_time = 0;
};

std::vector<std::string> run_commands();

// Runs one command and writes its CSV outputs plus manifest.json into out_dir. Errors are
// caught and mapped to statuses: configuration and input errors give 2, numerical failures
// give 3 with the message persisted in error.txt.
RunResult run_command(const std::string& command, const SolverConfig& cfg, const std::string& out_dir,
                      std::uint64_t seed);

// Tidy plot data: one row per (estimate, sample, variable). Writes the header for an empty set.
void emit_plot_data(const std::vector<EstimateReport>& reports, const std::string& path);
// One row per estimate with the fitted constant and its diagnostics.
void emit_constants(const std::vector<EstimateReport>& reports, const std::string& path);

// Fixed-format number text used in every output file.
std::string format_number(double v);

}  // namespace hs
