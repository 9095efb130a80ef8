#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dnstab::fem {

/// Nodal values on a mesh; index i belongs to node x_i.
using NodalField = std::vector<double>;

/// Nodes 0 = x_0 < x_1 < ... < x_N = 1 of the unit interval.
class Mesh1D {
 public:
  explicit Mesh1D(std::vector<double> nodes);

  static Mesh1D uniform(std::size_t n_cells);

  std::size_t n_cells() const noexcept { return nodes_.size() - 1; }
  std::size_t n_nodes() const noexcept { return nodes_.size(); }
  double x(std::size_t i) const { return nodes_[i]; }
  double h(std::size_t cell) const { return nodes_[cell + 1] - nodes_[cell]; }
  double midpoint(std::size_t cell) const { return 0.5 * (nodes_[cell] + nodes_[cell + 1]); }
  const std::vector<double>& nodes() const noexcept { return nodes_; }
  bool is_uniform() const noexcept { return uniform_; }

  bool operator==(const Mesh1D& other) const { return nodes_ == other.nodes_; }

  /// Linear interpolation of nodal values at x in [0, 1].
  double interpolate(std::span<const double> values, double x) const;

 private:
  std::vector<double> nodes_;
  bool uniform_ = false;
};

/// Uniform mesh with h = 1 / n_cells; n_cells >= 2.
Mesh1D build_mesh(std::size_t n_cells);

/// Row sums of the P1 mass matrix: (h_{i-1} + h_i) / 2, h / 2 at the ends.
std::vector<double> lumped_mass(const Mesh1D& mesh);

/// Throws GridMismatch unless the field has one value per node.
void require_nodal(const Mesh1D& mesh, std::span<const double> field, const char* what);

/// Lumped-mass L2 norm of a nodal field.
double l2_norm(const Mesh1D& mesh, std::span<const double> field);

/// Values of a nodal field transferred to another mesh by linear
/// interpolation.
NodalField transfer(const Mesh1D& from, std::span<const double> values, const Mesh1D& to);

}  // namespace dnstab::fem
