#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <ostream>

#include "dnstab/cli/config.hpp"

namespace dnstab::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,      // bad flags or configuration
  kExitAssertion = 2,  // a checked property failed
  kExitSolver = 3,     // a solve did not converge
};

struct RunContext {
  ExperimentConfig config;
  std::filesystem::path out_dir;
  std::size_t jobs = 1;
  std::ostream* log = nullptr;
  std::ostream* err = nullptr;
};

int run_solve(const RunContext& ctx);
int run_sweep(const RunContext& ctx);
int run_verify_toolkit(const RunContext& ctx);
int run_dual_check(const RunContext& ctx);
int run_convergence(const RunContext& ctx);

/// Parses argv, dispatches and maps every error to an exit code.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace dnstab::cli
