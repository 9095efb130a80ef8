#pragma once

#include <functional>
#include <span>
#include <vector>

#include "dnstab/solver/problem.hpp"
#include "dnstab/solver/tridiagonal.hpp"

namespace dnstab::solver {

/// beta, zeta and nu of a piecewise-linear pair as functions of
/// s = beta(u) + zeta(u). The parameter has slope 1 in (beta, zeta) even on
/// a plateau shared by both members, where u itself is undetermined.
class SumChart {
 public:
  explicit SumChart(const monotone::NonlinearityPair& pair);

  double sigma(double u) const { return sigma_(u); }
  const monotone::ScalarNonlinearity& beta() const noexcept { return beta_; }
  const monotone::ScalarNonlinearity& zeta() const noexcept { return zeta_; }
  const monotone::ScalarNonlinearity& nu() const noexcept { return nu_; }
  /// Point of sigma^{-1}(s) closest to `guess`.
  double recover(double s, double guess) const;

 private:
  monotone::ScalarNonlinearity sigma_;
  monotone::ScalarNonlinearity beta_;
  monotone::ScalarNonlinearity zeta_;
  monotone::ScalarNonlinearity nu_;
  std::vector<double> knots_;
  std::vector<double> sigma_at_;
};

/// True when beta' and zeta' vanish together on an interval.
bool has_common_plateau(const monotone::NonlinearityPair& pair);

/// Nonlinear system of one implicit Euler step:
///   R_i(U) = m_i (beta(U_i) - beta(P_i)) + tau F_i(nu(U), zeta(U)) - tau m_i f_i
/// at interior nodes, R_i(U) = U_i at the two boundary nodes. The chart form
/// uses s = beta(u) + zeta(u) as the unknown.
class StepSystem {
 public:
  StepSystem(const fem::Mesh1D& mesh, const monotone::NonlinearityPair& pair,
             const fem::FluxLaw& flux, std::span<const double> previous,
             std::span<const double> source_next, double tau);
  StepSystem(const fem::Mesh1D& mesh, const SumChart& chart, const fem::FluxLaw& flux,
             std::span<const double> previous_s, std::span<const double> source_next,
             double tau);

  fem::NodalField residual(std::span<const double> u) const;
  /// Analytic Jacobian. beta' and zeta' are replaced by max(., floor)
  /// (0 gives the exact Jacobian with right derivatives at kinks).
  Tridiagonal jacobian(std::span<const double> u, double beta_floor = 0.0,
                       double zeta_floor = 0.0) const;
  std::size_t size() const noexcept { return previous_beta_.size(); }

 private:
  struct Law {
    std::function<double(double)> beta, dbeta, zeta, dzeta, nu, dnu;
  };
  StepSystem(const fem::Mesh1D& mesh, Law law, const fem::FluxLaw& flux,
             std::span<const double> previous, std::span<const double> source_next,
             double tau);

  const fem::Mesh1D& mesh_;
  Law law_;
  const fem::FluxLaw& flux_;
  std::vector<double> mass_;
  std::vector<double> previous_beta_;
  std::vector<double> source_;
  double tau_;
};

/// One implicit Euler step from `previous` to time t_next. Newton with a
/// nonmonotone Armijo test on 1/2 |R|^2 runs first; if it stalls, the same
/// system is reached by continuation from shorter steps, and a damped Picard
/// iteration is the last resort. The pair is used as given; regularization is
/// the caller's choice. Piecewise-linear pairs are solved in the chart
/// variable, and nodes left on a common plateau keep the point nearest the
/// initial guess.
fem::NodalField step(std::span<const double> previous, double t_next, double tau,
                     const monotone::NonlinearityPair& pair, const ProblemSpec& spec,
                     const fem::Mesh1D& mesh, const SolverConfig& config,
                     StepStats* stats = nullptr);

/// Same, with spec.pair regularized by config.delta_reg.
fem::NodalField step(std::span<const double> previous, double t_next, double tau,
                     const ProblemSpec& spec, const fem::Mesh1D& mesh,
                     const SolverConfig& config, StepStats* stats = nullptr);

/// Regularization a solve with this config would use: config.delta_reg, or
/// SolverConfig::kAutoDelta when nu' vanishes on an interval inside the hull
/// of the initial values and 0.
double effective_delta(const ProblemSpec& spec, const fem::Mesh1D& mesh,
                       const SolverConfig& config);

/// Solves on the whole time grid. Step failures are rethrown as
/// NewtonDivergence carrying the step index.
DiscreteSolution solve(const ProblemSpec& spec, const fem::Mesh1D& mesh, const TimeGrid& grid,
                       const SolverConfig& config = {});

/// Nodal interpolant of u0 with the boundary pinned to 0.
fem::NodalField initial_slice(const ProblemSpec& spec, const fem::Mesh1D& mesh);

}  // namespace dnstab::solver
