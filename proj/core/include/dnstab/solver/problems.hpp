#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dnstab/solver/problem.hpp"

namespace dnstab::solver::problems {

/// u_t = u_xx, u0 = sin(pi x), f = 0, T = 0.1.
ProblemSpec heat(double horizon = 0.1);
/// Stefan pair, linear flux, u0 = 2 sin(pi x) (crosses the plateau), f = 0.
ProblemSpec stefan(double horizon = 0.1);
/// Saturation pair with the mobility flux, u0 = 1.5 sin(pi x), f = 0.
ProblemSpec richards(double horizon = 0.1);
/// beta = zeta = Id with the p-Laplacian flux, u0 = sin(pi x), f = 0.
ProblemSpec p_laplace(double p, double horizon = 0.1);
/// Common-plateau pair, linear flux, u0 = 0.8 sin(pi x) + 4 exp(-100 (x - 1/2)^2):
/// a hot core inside a region parked on the shared plateau.
ProblemSpec common_plateau(double horizon = 0.1);
/// Heat equation with f = sin(pi x) and u0 = 0.
ProblemSpec forced_heat(double horizon = 0.1);

/// heat, stefan, richards, p-laplace-1.5, p-laplace-3, common-plateau, forced-heat.
ProblemSpec problem_by_name(std::string_view name, double horizon = 0.1);
const std::vector<std::string>& problem_names();

}  // namespace dnstab::solver::problems
