#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dnstab/fem/mesh.hpp"
#include "dnstab/solver/problem.hpp"

namespace dnstab::metrics {

struct TranslateProfile {
  std::vector<double> shifts;
  std::vector<double> norms;
  /// Least-squares slope of log(norm) against log(shift); empty when every
  /// norm vanishes (no decay to measure).
  std::optional<double> exponent;
};

/// |X(., . + s) - X|_{L^r(R; L2)} with X piecewise constant in time (value
/// X^{k+1} on (t_k, t_{k+1}]) and extended by zero outside (0, T), for
/// s = j tau on a uniform grid.
double time_translate_norm(const fem::Mesh1D& mesh, const solver::TimeGrid& grid,
                           const std::vector<fem::NodalField>& traj, std::size_t shift_steps,
                           double r = 2.0);

/// Translate norms for each shift (in steps) and the fitted exponent. Needs
/// at least three shifts.
TranslateProfile time_translate_profile(const fem::Mesh1D& mesh, const solver::TimeGrid& grid,
                                        const std::vector<fem::NodalField>& traj,
                                        const std::vector<std::size_t>& shift_steps,
                                        double r = 2.0);

}  // namespace dnstab::metrics
