#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dnstab/fem/mesh.hpp"

namespace dnstab::metrics {

/// phi_l(x) = sqrt(2) sin(l pi x), l = 1..L, weighted by 2^-l.
class SineFamily {
 public:
  explicit SineFamily(std::size_t count = 20);

  std::size_t count() const noexcept { return count_; }
  double weight(std::size_t l) const;
  double value(std::size_t l, double x) const;
  std::vector<double> nodal(const fem::Mesh1D& mesh, std::size_t l) const;
  /// Lumped-mass pairing <field, phi_l>.
  double pairing(const fem::Mesh1D& mesh, std::span<const double> field, std::size_t l) const;
  /// max_{l,k} |<phi_l, phi_k> - delta_lk| on the mesh. Exact up to rounding
  /// on uniform meshes with more than L cells.
  double orthonormality_defect(const fem::Mesh1D& mesh) const;
  /// sum_l 2^-l |phi_l|: the constant relating the weak metric to sup-time L2.
  double weight_norm_sum() const;

 private:
  std::size_t count_;
};

}  // namespace dnstab::metrics
