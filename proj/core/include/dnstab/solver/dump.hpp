#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "dnstab/solver/problem.hpp"

namespace dnstab::solver {

/// Columnar text dump of one trajectory field: optional '#' comment lines,
/// a header row "t x_0 ... x_N" with the node coordinates, then one row per
/// time slice. Every number is printed with 17 significant digits.
void write_trajectory(std::ostream& out, const DiscreteSolution& sol, Field which,
                      const std::vector<std::string>& comments = {});

/// Writes u, beta, zeta, nu dumps as <stem>_<field>.txt into `dir`.
std::vector<std::filesystem::path> write_all_trajectories(
    const std::filesystem::path& dir, const std::string& stem, const DiscreteSolution& sol,
    const std::vector<std::string>& comments = {});

}  // namespace dnstab::solver
