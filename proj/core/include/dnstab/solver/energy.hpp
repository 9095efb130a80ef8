#pragma once

#include <optional>
#include <vector>

#include "dnstab/monotone/hypotheses.hpp"
#include "dnstab/solver/problem.hpp"

namespace dnstab::solver {

struct EnergyAudit {
  /// sum_i m_i zeta^{k+1}_i (beta^{k+1}_i - beta^k_i) - sum_i m_i (E^{k+1}_i - E^k_i)
  /// with E = B(beta(u)), one entry per step.
  std::vector<double> step_slack;
  double min_step_slack = 0.0;
  /// E(U^0) + sum_k tau <f, zeta^{k+1}> - E(U^K) - sum_k tau W_k, where W_k is
  /// the discrete flux work.
  double global_lhs = 0.0;
  double global_rhs = 0.0;
  double global_slack = 0.0;
  /// k -> sum_i m_i B(beta(U^k_i)).
  std::vector<double> energy;
  /// Largest increase E(U^{k+1}) - E(U^k) (<= 0 when nonincreasing).
  double max_energy_increase = 0.0;

  // The four quantities bounded uniformly by the energy estimate.
  double sup_energy = 0.0;
  double zeta_w1p_norm = 0.0;
  double sup_beta_l2 = 0.0;
  double dt_beta_dual_norm = 0.0;

  /// Tolerance the slacks are held to: 1e-9 times the problem magnitude.
  double tolerance = 0.0;
  bool steps_ok() const { return min_step_slack >= -tolerance; }
  bool global_ok() const { return global_slack >= -tolerance; }
  bool nonincreasing() const { return max_energy_increase <= tolerance; }
};

EnergyAudit energy_audit(const DiscreteSolution& sol, const ProblemSpec& spec);

struct AprioriBounds {
  double K3 = 0.0;
  double u0_l2_squared = 0.0;
  /// (sum_k tau |f(t_{k+1})|_{L1}^{p'})^{1/p'}; the L1 norm dominates the
  /// W^{-1,p'} norm on (0, 1).
  double source_norm = 0.0;
  double theta_term = 0.0;
  /// K3 |u0|^2 + theta T + (1/p') (2/(a p))^{p'/p} |f|^{p'}: bounds sup_t E.
  double energy_bound = 0.0;
  /// (2 / a) * energy_bound: bounds sum_k tau |zeta(u)_x|_p^p.
  double gradient_bound = 0.0;
};

/// Bounds from the coercivity of a, the quadratic growth of B(beta) and
/// Young's inequality, evaluated with discrete norms on the given grids.
/// `delta` is the regularization the solve uses.
AprioriBounds apriori_bounds(const ProblemSpec& spec, const fem::Mesh1D& mesh,
                             const TimeGrid& grid, double delta = 0.0);

struct AprioriCheck {
  AprioriBounds bounds;
  double observed_gradient = 0.0;
  double observed_energy = 0.0;
  double factor = 1.1;
  bool passed = false;
};

AprioriCheck check_apriori(const DiscreteSolution& sol, const ProblemSpec& spec,
                           double factor = 1.1);

/// min over kappa of (sum_c h |S_c - kappa|^{q})^{1/q}, S_c = sum_{i > c} g_i:
/// the W^{-1,q} norm of the nodal functional g on W^{1,p}_0(0, 1), 1/p + 1/q = 1.
double dual_sobolev_norm(const fem::Mesh1D& mesh, std::span<const double> g, double q);

}  // namespace dnstab::solver
