// The experiment commands behind the lsieve CLI.

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "lsieve/harness/config.hpp"
#include "lsieve/harness/report.hpp"
#include "lsieve/sieve.hpp"
#include "lsieve/weylsum.hpp"

namespace lsieve::harness {

enum ExitCode : int { kOk = 0, kFailure = 1, kConfigError = 2, kBudgetExceeded = 3 };

struct CommandResult {
  Table table;
  int exit_code = kOk;
};

/// Identity suite: one row per identity with its worst discrepancy and tolerance.
CommandResult cmd_identities(const ExperimentConfig& cfg);
/// One row per (family, Q, N, coefficient kind, seed).
CommandResult cmd_sweep(const ExperimentConfig& cfg);
/// K counts per (family, Q, N) and the smoothed bound at the densest point.
CommandResult cmd_spacing(const ExperimentConfig& cfg);
/// Weyl sums: the k = 2 three-way identity and the differencing right-hand side.
CommandResult cmd_weyl(const ExperimentConfig& cfg);
/// Dual best constants of random complex matrices.
CommandResult cmd_duality(const ExperimentConfig& cfg);
/// Per-family maxima of the sweep ratios.
CommandResult cmd_report(const ExperimentConfig& cfg);

/// Names accepted by run_command.
const std::vector<std::string>& command_names();

/// Validates, runs, and writes the table to cfg.out (or `os` when empty) in
/// cfg.format. Config errors are reported on `err` and return kConfigError.
int run_command(const std::string& name, const ExperimentConfig& cfg, std::ostream& os, std::ostream& err);

/// Rows of a sweep, in cell order.
std::vector<SieveReport> sweep_reports(const ExperimentConfig& cfg);

/// Three deterministic (q1, r1, j) choices with Q0 / sqrt(2) < N(q1) <= Q0.
std::vector<WeylConfig> weyl_cases(double Q0, double truncation_tol = 1e-12);

/// "a+bi" rendering of a Gaussian integer.
std::string gauss_string(GaussInt z);

}  // namespace lsieve::harness
