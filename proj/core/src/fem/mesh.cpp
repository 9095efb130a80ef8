#include "dnstab/fem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dnstab/errors.hpp"

namespace dnstab::fem {

Mesh1D::Mesh1D(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 3) throw InvalidArgument("mesh needs at least 2 cells");
  if (nodes_.front() != 0.0 || nodes_.back() != 1.0) {
    throw InvalidArgument("mesh must span exactly [0, 1]");
  }
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (!(nodes_[i] > nodes_[i - 1])) throw InvalidArgument("mesh nodes must increase strictly");
  }
  const double h0 = nodes_[1] - nodes_[0];
  uniform_ = true;
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (std::abs((nodes_[i] - nodes_[i - 1]) - h0) > 1e-13) uniform_ = false;
  }
}

Mesh1D Mesh1D::uniform(std::size_t n_cells) {
  if (n_cells < 2) {
    throw InvalidArgument("mesh needs at least 2 cells (got " + std::to_string(n_cells) + ")");
  }
  std::vector<double> nodes(n_cells + 1);
  for (std::size_t i = 0; i <= n_cells; ++i) {
    nodes[i] = static_cast<double>(i) / static_cast<double>(n_cells);
  }
  nodes.back() = 1.0;
  return Mesh1D(std::move(nodes));
}

double Mesh1D::interpolate(std::span<const double> values, double x) const {
  require_nodal(*this, values, "interpolated field");
  if (x <= 0.0) return values.front();
  if (x >= 1.0) return values.back();
  const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  const auto i = static_cast<std::size_t>(it - nodes_.begin()) - 1;
  const double w = (x - nodes_[i]) / (nodes_[i + 1] - nodes_[i]);
  return (1.0 - w) * values[i] + w * values[i + 1];
}

Mesh1D build_mesh(std::size_t n_cells) { return Mesh1D::uniform(n_cells); }

std::vector<double> lumped_mass(const Mesh1D& mesh) {
  std::vector<double> m(mesh.n_nodes(), 0.0);
  for (std::size_t c = 0; c < mesh.n_cells(); ++c) {
    m[c] += 0.5 * mesh.h(c);
    m[c + 1] += 0.5 * mesh.h(c);
  }
  return m;
}

void require_nodal(const Mesh1D& mesh, std::span<const double> field, const char* what) {
  if (field.size() != mesh.n_nodes()) {
    throw GridMismatch(std::string(what) + " has " + std::to_string(field.size()) +
                       " values for a mesh with " + std::to_string(mesh.n_nodes()) + " nodes");
  }
}

double l2_norm(const Mesh1D& mesh, std::span<const double> field) {
  require_nodal(mesh, field, "field");
  const auto m = lumped_mass(mesh);
  double sum = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) sum += m[i] * field[i] * field[i];
  return std::sqrt(sum);
}

NodalField transfer(const Mesh1D& from, std::span<const double> values, const Mesh1D& to) {
  NodalField out(to.n_nodes());
  for (std::size_t i = 0; i < to.n_nodes(); ++i) out[i] = from.interpolate(values, to.x(i));
  return out;
}

}  // namespace dnstab::fem
