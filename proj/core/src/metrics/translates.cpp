#include "dnstab/metrics/translates.hpp"

#include <cmath>

#include "dnstab/errors.hpp"

namespace dnstab::metrics {

double time_translate_norm(const fem::Mesh1D& mesh, const solver::TimeGrid& grid,
                           const std::vector<fem::NodalField>& traj, std::size_t shift_steps,
                           double r) {
  const std::size_t steps = grid.steps();
  if (traj.size() != steps + 1) throw GridMismatch("trajectory does not match the time grid");
  if (shift_steps == 0 || shift_steps >= steps) {
    throw InvalidArgument("time shift must lie strictly inside (0, T)");
  }
  if (!(r >= 1.0)) throw InvalidArgument("translate exponent r must be at least 1");
  const double tau = grid.tau(0);
  for (std::size_t k = 0; k < steps; ++k) {
    if (std::abs(grid.tau(k) - tau) > 1e-12 * tau) {
      throw InvalidArgument("time translates need a uniform time grid");
    }
  }
  const auto m = fem::lumped_mass(mesh);
  // Slice index m in 1..K holds (t_{m-1}, t_m]; anything else is zero.
  auto value = [&](long idx, std::size_t i) {
    if (idx < 1 || idx > static_cast<long>(steps)) return 0.0;
    return traj[static_cast<std::size_t>(idx)][i];
  };
  const long j = static_cast<long>(shift_steps);
  double total = 0.0;
  for (long idx = 1 - j; idx <= static_cast<long>(steps); ++idx) {
    double sq = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      const double d = value(idx + j, i) - value(idx, i);
      sq += m[i] * d * d;
    }
    total += tau * std::pow(std::sqrt(sq), r);
  }
  return std::pow(total, 1.0 / r);
}

TranslateProfile time_translate_profile(const fem::Mesh1D& mesh, const solver::TimeGrid& grid,
                                        const std::vector<fem::NodalField>& traj,
                                        const std::vector<std::size_t>& shift_steps, double r) {
  if (shift_steps.size() < 3) {
    throw InvalidArgument("translate fit needs at least 3 shifts");
  }
  TranslateProfile p;
  for (std::size_t j : shift_steps) {
    p.shifts.push_back(static_cast<double>(j) * grid.tau(0));
    p.norms.push_back(time_translate_norm(mesh, grid, traj, j, r));
  }
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < p.norms.size(); ++i) {
    if (p.norms[i] > 0.0) {
      lx.push_back(std::log(p.shifts[i]));
      ly.push_back(std::log(p.norms[i]));
    }
  }
  if (lx.size() < 2) return p;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(lx.size());
  my /= static_cast<double>(ly.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (sxx > 0.0) p.exponent = sxy / sxx;
  return p;
}

}  // namespace dnstab::metrics
