#pragma once

#include "dnstab/solver/problem.hpp"

namespace dnstab::solver {

struct TrajectoryError {
  /// max_k |X^k - exact(., t_k)| in the lumped L2 norm.
  double sup_time_l2 = 0.0;
  /// (sum_k tau |X^{k+1} - exact(., t_{k+1})|^2)^{1/2}.
  double l2_l2 = 0.0;
};

/// Error of one trajectory field of `sol` against an exact nodal oracle.
TrajectoryError manufactured_error(const DiscreteSolution& sol, const SpaceTimeFunction& exact,
                                   Field which);

/// exp(-pi^2 t) sin(pi x): the solution of u_t = u_xx with u0 = sin(pi x).
double heat_exact(double x, double t);

}  // namespace dnstab::solver
