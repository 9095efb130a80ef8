#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dnstab/solver/problem.hpp"
#include "dnstab/stability/family.hpp"

namespace dnstab::cli {

struct ConfigIssue {
  int line = 0;  // 1-based, 0 when unknown
  std::string message;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  const std::vector<ConfigIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

struct PiecewiseLinearSpec {
  std::vector<double> breakpoints;
  std::vector<double> values;
  double left_slope = 1.0;
  double right_slope = 1.0;
};

struct FunctionSpec {
  std::string kind = "zero";  // zero | sine | bump
  double amplitude = 1.0;
};

struct FluxSpec {
  std::string kind = "linear";  // linear | mobility | p-laplace
  double lambda = 1.0;
  double p = 2.0;
  double eps = 1e-6;
};

struct ProblemConfig {
  std::optional<std::string> preset;
  std::optional<std::string> pair_preset;
  std::optional<PiecewiseLinearSpec> beta;
  std::optional<PiecewiseLinearSpec> zeta;
  std::optional<FluxSpec> flux;
  std::optional<FunctionSpec> initial;
  std::optional<FunctionSpec> source;
  std::optional<double> horizon;
};

struct SweepConfig {
  stability::FamilyKind kind = stability::FamilyKind::kDelta;
  std::vector<int> indices{2, 4, 8, 16, 32};
};

struct DualConfig {
  std::vector<double> eps{0.2, 0.1, 0.05};
  std::vector<double> guess_shifts{-1.0, 1.0};
};

struct ConvergenceConfig {
  std::vector<std::size_t> cells{16, 32, 64};
  double tau_factor = 0.4;  // tau = tau_factor * h^2
  double min_order = 1.8;
};

struct VerifyConfig {
  std::size_t samples = 10000;
  double range = 10.0;
};

struct ExperimentConfig {
  std::filesystem::path source_path;
  std::string text;  // raw file contents, hashed into the manifest
  ProblemConfig problem;
  std::size_t cells = 64;
  double tau = 1e-3;
  solver::SolverConfig solver;
  SweepConfig sweep;
  DualConfig dual;
  ConvergenceConfig convergence;
  VerifyConfig verify;
  std::optional<std::filesystem::path> output;
  std::uint64_t seed = 42;

  /// Problem assembled from the preset and the explicit overrides.
  solver::ProblemSpec build_problem() const;
};

/// Parses YAML text. Collects every schema problem before throwing
/// ConfigError; unknown keys are errors.
ExperimentConfig parse_config_text(const std::string& text,
                                   const std::filesystem::path& source = "<memory>");
ExperimentConfig parse_config(const std::filesystem::path& path);

}  // namespace dnstab::cli
