#pragma once

#include <vector>

#include "dnstab/fem/mesh.hpp"
#include "dnstab/metrics/test_functions.hpp"
#include "dnstab/solver/problem.hpp"

namespace dnstab::metrics {

using Trajectory = std::vector<fem::NodalField>;

/// Two trajectories on a common mesh: the finer of the two, with the
/// coarser interpolated linearly onto it.
struct AlignedPair {
  fem::Mesh1D mesh;
  Trajectory a;
  Trajectory b;
};

/// Throws GridMismatch when the time grids differ or one mesh does not
/// contain the other's node count relation (finer is chosen by node count).
AlignedPair align(const fem::Mesh1D& mesh_a, const Trajectory& a, const fem::Mesh1D& mesh_b,
                  const Trajectory& b);
AlignedPair align(const solver::DiscreteSolution& a, const solver::DiscreteSolution& b,
                  solver::Field which);

/// max over slices of the lumped L2 distance.
double sup_time_l2(const fem::Mesh1D& mesh, const Trajectory& a, const Trajectory& b);

/// max over slices of sum_l 2^-l min(1, |<a(t) - b(t), phi_l>|).
double weak_uniform_metric(const fem::Mesh1D& mesh, const Trajectory& a, const Trajectory& b,
                           const SineFamily& family = SineFamily{});

/// (sum_{k>=1} tau_{k-1} sum_c |d_x (a^k - b^k)|^p h)^{1/p}.
double lp_w1p_gap(const fem::Mesh1D& mesh, const solver::TimeGrid& grid, const Trajectory& a,
                  const Trajectory& b, double p);

}  // namespace dnstab::metrics
