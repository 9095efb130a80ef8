#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dnstab/metrics/test_functions.hpp"
#include "dnstab/stability/family.hpp"

namespace dnstab::stability {

struct SweepRow {
  int n = 0;
  double sup_l2_nu = 0.0;
  double weak_unif_beta = 0.0;
  double w1p_gap_zeta = 0.0;
  /// Smaller of the per-step and global energy slacks.
  double energy_slack = 0.0;
  double newton_iters_mean = 0.0;
  bool failed = false;
  std::string error;
};

struct TrendFlag {
  std::string metric;
  double first = 0.0;
  double last = 0.0;
  bool passed = false;
};

struct SweepReport {
  std::string base_name;
  FamilyKind kind = FamilyKind::kDelta;
  std::vector<SweepRow> rows;
  std::vector<TrendFlag> trends;
  UniformityReport uniformity;

  bool trends_passed() const;
  bool any_failed() const;
};

struct SweepOptions {
  std::size_t jobs = 1;
  std::size_t test_functions = 20;
};

/// Last value at most half the first, or every value within 10 * newton_tol
/// (members indistinguishable from the base).
TrendFlag trend_flag(const std::string& metric, const std::vector<double>& values,
                     double newton_tol);

/// Solves every member on (mesh, grid) and measures the three distances to
/// `reference` (interpolated onto the finer mesh when the meshes differ).
/// Member failures are recorded per row; the sweep carries on.
SweepReport run_sweep(const PerturbationFamily& family, const fem::Mesh1D& mesh,
                      const solver::TimeGrid& grid, const solver::SolverConfig& config,
                      const solver::DiscreteSolution& reference,
                      const SweepOptions& options = {});

}  // namespace dnstab::stability
