#include "dnstab/metrics/distances.hpp"

#include <algorithm>
#include <cmath>

#include "dnstab/errors.hpp"
#include "dnstab/fem/assembly.hpp"

namespace dnstab::metrics {

namespace {

void require_same_shape(const fem::Mesh1D& mesh, const Trajectory& a, const Trajectory& b) {
  if (a.size() != b.size()) {
    throw GridMismatch("trajectories have " + std::to_string(a.size()) + " and " +
                       std::to_string(b.size()) + " time slices");
  }
  for (std::size_t k = 0; k < a.size(); ++k) {
    fem::require_nodal(mesh, a[k], "trajectory slice");
    fem::require_nodal(mesh, b[k], "trajectory slice");
  }
}

Trajectory transfer_all(const fem::Mesh1D& from, const Trajectory& t, const fem::Mesh1D& to) {
  Trajectory out;
  out.reserve(t.size());
  for (const auto& slice : t) out.push_back(fem::transfer(from, slice, to));
  return out;
}

}  // namespace

AlignedPair align(const fem::Mesh1D& mesh_a, const Trajectory& a, const fem::Mesh1D& mesh_b,
                  const Trajectory& b) {
  if (a.size() != b.size()) throw GridMismatch("trajectories live on different time grids");
  if (mesh_a == mesh_b) return {mesh_a, a, b};
  if (mesh_a.n_nodes() >= mesh_b.n_nodes()) return {mesh_a, a, transfer_all(mesh_b, b, mesh_a)};
  return {mesh_b, transfer_all(mesh_a, a, mesh_b), b};
}

AlignedPair align(const solver::DiscreteSolution& a, const solver::DiscreteSolution& b,
                  solver::Field which) {
  if (!(a.grid == b.grid)) throw GridMismatch("solutions live on different time grids");
  return align(a.mesh, solver::trajectory(a, which), b.mesh, solver::trajectory(b, which));
}

double sup_time_l2(const fem::Mesh1D& mesh, const Trajectory& a, const Trajectory& b) {
  require_same_shape(mesh, a, b);
  const auto m = fem::lumped_mass(mesh);
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      const double d = a[k][i] - b[k][i];
      s += m[i] * d * d;
    }
    worst = std::max(worst, std::sqrt(s));
  }
  return worst;
}

double weak_uniform_metric(const fem::Mesh1D& mesh, const Trajectory& a, const Trajectory& b,
                           const SineFamily& family) {
  require_same_shape(mesh, a, b);
  std::vector<std::vector<double>> phi;
  for (std::size_t l = 1; l <= family.count(); ++l) phi.push_back(family.nodal(mesh, l));
  const auto m = fem::lumped_mass(mesh);
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    double d = 0.0;
    for (std::size_t l = 1; l <= family.count(); ++l) {
      double pairing = 0.0;
      for (std::size_t i = 0; i < m.size(); ++i) pairing += m[i] * (a[k][i] - b[k][i]) * phi[l - 1][i];
      d += family.weight(l) * std::min(1.0, std::abs(pairing));
    }
    worst = std::max(worst, d);
  }
  return worst;
}

double lp_w1p_gap(const fem::Mesh1D& mesh, const solver::TimeGrid& grid, const Trajectory& a,
                  const Trajectory& b, double p) {
  require_same_shape(mesh, a, b);
  if (!(p >= 1.0)) throw InvalidArgument("exponent p must be at least 1");
  if (a.size() != grid.steps() + 1) throw GridMismatch("trajectory does not match the time grid");
  double total = 0.0;
  std::vector<double> diff(mesh.n_nodes());
  for (std::size_t k = 1; k < a.size(); ++k) {
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = a[k][i] - b[k][i];
    total += grid.tau(k - 1) * fem::gradient_power(mesh, diff, p);
  }
  return std::pow(total, 1.0 / p);
}

}  // namespace dnstab::metrics
