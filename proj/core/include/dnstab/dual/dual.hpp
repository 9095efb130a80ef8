#pragma once

#include <cstddef>
#include <vector>

#include "dnstab/fem/flux_law.hpp"
#include "dnstab/fem/mesh.hpp"
#include "dnstab/solver/problem.hpp"

namespace dnstab::dual {

using Slices = std::vector<fem::NodalField>;

struct UdQ {
  /// beta(u1) + zeta(u1) - beta(u2) - zeta(u2), one slice per time level.
  Slices ud;
  /// (zeta(u1) - zeta(u2)) / ud where |ud| > kThreshold, else 0.
  Slices q;
  static constexpr double kThreshold = 1e-14;
};

/// Throws GridMismatch unless both solutions share mesh and time grid.
UdQ compute_ud_q(const solver::DiscreteSolution& sol1, const solver::DiscreteSolution& sol2);

/// (1 - 2 eps) q + eps for q in [0, 1] and eps in (0, 1/2).
double regularize_q(double q, double eps);
Slices regularize_q(const Slices& q, double eps);

/// The two ratios (q_eps - q)^2 / q_eps and (q_eps - q)^2 / (1 - q_eps),
/// both bounded by eps.
struct QRatios {
  double below = 0.0;
  double above = 0.0;
};
QRatios q_ratios(double q, double eps);

struct DualProblemSpec {
  /// Coefficient g per time level, in [g_min, 1 - g_min].
  Slices g;
  /// Linear flux lambda(x) xi.
  fem::FluxLaw flux;
  solver::SpaceTimeFunction w;
  double g_min = 0.0;

  /// Throws InvalidArgument when g_min is outside (0, 1/2), g leaves its
  /// range, or the flux is not linear.
  void validate(const fem::Mesh1D& mesh, const solver::TimeGrid& grid) const;
};

/// g sampled at every node and time level.
Slices sample(const fem::Mesh1D& mesh, const solver::TimeGrid& grid,
              const solver::SpaceTimeFunction& g);

/// sin^2(pi x) sin^2(pi t / T): vanishes on the boundary and at t = 0, T.
solver::SpaceTimeFunction sine_bump(double horizon);

struct DualSolution {
  fem::Mesh1D mesh;
  solver::TimeGrid grid;
  /// psi^k for k = 0..K, psi^K = 0.
  Slices psi;
  /// Max-norm residual of each linear solve, relative to max(1, |rhs|).
  std::vector<double> residuals;
};

/// Backward Euler from psi^K = 0:
///   [(1 - g^k) M / tau + diag(g^k) A] psi^k = (1 - g^k) M / tau psi^{k+1} - M w^k
/// with lumped mass M, stiffness A of the linear flux and psi = 0 on the
/// boundary. Requires a uniform time grid.
DualSolution solve_dual_backward(const DualProblemSpec& spec, const fem::Mesh1D& mesh,
                                 const solver::TimeGrid& grid);

struct DualEnergy {
  /// sum_k tau sum_i m_i [(1 - g) (d_t psi)^2 + g (div)^2] at levels 0..K-1,
  /// with div = -(A psi)_i / m_i.
  double lhs = 0.0;
  double rhs = 0.0;
  double C0 = 0.0;
  double grad_w_sq = 0.0;
  double w_sq = 0.0;
  double dt_w_sq = 0.0;
  double slack() const { return rhs - lhs; }
  bool passed() const { return lhs <= rhs; }
};

/// (2 / lambda_lower) sqrt(lambda_upper^2 + D^2) sqrt(T^2 lambda_upper^2 + D^2 + D^2 T^2)
/// with D = 1 the diameter of (0, 1).
double energy_constant(double lambda_lower, double lambda_upper, double horizon);

DualEnergy dual_energy_check(const DualSolution& psi, const DualProblemSpec& spec);

struct WitnessRow {
  double eps = 0.0;
  /// |sum_k tau sum_i m_i ud w|.
  double witness = 0.0;
  /// sqrt(2 eps C0 (|w_x|^2 + |w|^2 + |w_t|^2) |ud|^2).
  double bound = 0.0;
  /// sqrt(2 eps |ud|^2 lhs), the same chain with the observed dual energy.
  double chain_bound = 0.0;
  double energy_lhs = 0.0;
  double energy_rhs = 0.0;
  double ud_norm = 0.0;
};

/// One dual solve per eps with g = q_eps. Throws InvalidArgument for a
/// nonlinear flux or a non-uniform grid.
std::vector<WitnessRow> uniqueness_witness(const solver::DiscreteSolution& sol1,
                                           const solver::DiscreteSolution& sol2,
                                           const fem::FluxLaw& flux,
                                           const solver::SpaceTimeFunction& w,
                                           const std::vector<double>& eps_ladder,
                                           std::size_t jobs = 1);

}  // namespace dnstab::dual
