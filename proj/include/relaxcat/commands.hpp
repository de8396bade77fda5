#pragma once

#include <iosfwd>
#include <string_view>

#include "relaxcat/config.hpp"

namespace relaxcat {

enum ExitCode : int { kExitOk = 0, kExitSolverFailure = 1, kExitConfigError = 2 };

/// Writes solution.csv, diagnostics.csv and timing.csv into cfg.out_dir.
void cmd_run(const RunConfig& cfg, std::ostream& log);

/// Writes convergence.csv (scheme,eps,N,l1_error,eoc).
void cmd_convergence(const RunConfig& cfg, std::ostream& log);

/// Writes stability.csv (a,eps,mu_max,scheme).
void cmd_stability(const RunConfig& cfg, std::ostream& log);

void cmd_list_cases(std::ostream& out);

/// Dispatches a command, mapping failures to exit codes and printing one
/// machine-readable line on `err`:
///   error kind=<config|solver|io> [time=<t> cell=<i>] message="<text>"
int run_command(std::string_view command, const RunConfig& cfg, std::ostream& out,
                std::ostream& err);

/// Runs the quick self-checks; one line per check, exit 0 when all pass.
int seed_check(std::ostream& out);

}  // namespace relaxcat
