#include "dnstab/solver/manufactured.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dnstab::solver {

TrajectoryError manufactured_error(const DiscreteSolution& sol, const SpaceTimeFunction& exact,
                                   Field which) {
  const auto& traj = trajectory(sol, which);
  const auto m = fem::lumped_mass(sol.mesh);
  TrajectoryError e;
  double l2l2 = 0.0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double t = sol.grid.t(k);
    double sq = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      const double d = traj[k][i] - exact(sol.mesh.x(i), t);
      sq += m[i] * d * d;
    }
    e.sup_time_l2 = std::max(e.sup_time_l2, std::sqrt(sq));
    if (k > 0) l2l2 += sol.grid.tau(k - 1) * sq;
  }
  e.l2_l2 = std::sqrt(l2l2);
  return e;
}

double heat_exact(double x, double t) {
  constexpr double pi = std::numbers::pi;
  return std::exp(-pi * pi * t) * std::sin(pi * x);
}

}  // namespace dnstab::solver
