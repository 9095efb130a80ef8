#include "dnstab/metrics/test_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dnstab/errors.hpp"

namespace dnstab::metrics {

SineFamily::SineFamily(std::size_t count) : count_(count) {
  if (count == 0) throw InvalidArgument("test function family needs at least one member");
}

double SineFamily::weight(std::size_t l) const {
  if (l < 1 || l > count_) throw InvalidArgument("test function index out of range");
  return std::ldexp(1.0, -static_cast<int>(l));
}

double SineFamily::value(std::size_t l, double x) const {
  return std::numbers::sqrt2 * std::sin(static_cast<double>(l) * std::numbers::pi * x);
}

std::vector<double> SineFamily::nodal(const fem::Mesh1D& mesh, std::size_t l) const {
  std::vector<double> v(mesh.n_nodes());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = value(l, mesh.x(i));
  v.front() = 0.0;
  v.back() = 0.0;
  return v;
}

double SineFamily::pairing(const fem::Mesh1D& mesh, std::span<const double> field,
                           std::size_t l) const {
  fem::require_nodal(mesh, field, "paired field");
  const auto m = fem::lumped_mass(mesh);
  double s = 0.0;
  for (std::size_t i = 1; i + 1 < m.size(); ++i) s += m[i] * field[i] * value(l, mesh.x(i));
  return s;
}

double SineFamily::orthonormality_defect(const fem::Mesh1D& mesh) const {
  if (mesh.n_cells() <= count_) {
    throw InvalidArgument("sine family of size " + std::to_string(count_) +
                          " is not orthonormal on a mesh with " +
                          std::to_string(mesh.n_cells()) + " cells");
  }
  double worst = 0.0;
  for (std::size_t l = 1; l <= count_; ++l) {
    const auto phi = nodal(mesh, l);
    for (std::size_t k = l; k <= count_; ++k) {
      const double g = pairing(mesh, phi, k);
      worst = std::max(worst, std::abs(g - (l == k ? 1.0 : 0.0)));
    }
  }
  return worst;
}

double SineFamily::weight_norm_sum() const {
  double s = 0.0;
  for (std::size_t l = 1; l <= count_; ++l) s += weight(l);
  return s;
}

}  // namespace dnstab::metrics
