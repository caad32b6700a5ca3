#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fsopc/config.hpp"

namespace fsopc {

/// Process exit codes.
enum ExitCode : int { kExitOk = 0, kExitRuntime = 1, kExitConfig = 2 };

/// Runs the sweep; writes the CSV to cfg.out_path and a JSON-lines run log.
int command_sweep(const RunConfig& cfg, std::ostream& diag);

/// Semi-analytic Genie Bound over the configured grid, as CSV
/// (`n_s,n_b,snr_db,genie_bep,std_error`) to cfg.out_path ("-" for stdout).
int command_genie_bound(const RunConfig& cfg, std::ostream& stdout_stream, std::ostream& diag);

/// Sample moments of the configured fading model, as CSV to cfg.out_path ("-" for stdout).
int command_fading_stats(const RunConfig& cfg, std::ostream& stdout_stream, std::ostream& diag);

struct ValidateOptions {
  bool quick = false;
  /// Negative control: the sort-based detector breaks metric ties toward
  /// more ones, which the oracle comparison must catch.
  bool inject_fault = false;
  std::uint64_t seed = 1;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<CheckResult> run_validation(const ValidateOptions& options);

/// Prints a pass/fail table; exit 0 iff every check passes.
int command_validate(const ValidateOptions& options, std::ostream& out);

}  // namespace fsopc
