#include "dnstab/fem/assembly.hpp"

#include <cmath>

#include "dnstab/errors.hpp"

namespace dnstab::fem {

std::vector<double> cell_gradients(const Mesh1D& mesh, std::span<const double> z_field) {
  require_nodal(mesh, z_field, "z field");
  std::vector<double> g(mesh.n_cells());
  for (std::size_t c = 0; c < mesh.n_cells(); ++c) g[c] = (z_field[c + 1] - z_field[c]) / mesh.h(c);
  return g;
}

NodalField assemble_flux_residual(const Mesh1D& mesh, const FluxLaw& flux,
                                  std::span<const double> s_field,
                                  std::span<const double> z_field) {
  require_nodal(mesh, s_field, "s field");
  require_nodal(mesh, z_field, "z field");
  NodalField r(mesh.n_nodes(), 0.0);
  for (std::size_t c = 0; c < mesh.n_cells(); ++c) {
    const double xi = (z_field[c + 1] - z_field[c]) / mesh.h(c);
    const double s_mid = 0.5 * (s_field[c] + s_field[c + 1]);
    const double a = flux(mesh.midpoint(c), s_mid, xi);
    // dphi/dx = -1/h on the left node, +1/h on the right; times h.
    r[c] -= a;
    r[c + 1] += a;
  }
  r.front() = 0.0;
  r.back() = 0.0;
  return r;
}

double flux_work(const Mesh1D& mesh, const FluxLaw& flux, std::span<const double> s_field,
                 std::span<const double> z_field) {
  require_nodal(mesh, s_field, "s field");
  require_nodal(mesh, z_field, "z field");
  double total = 0.0;
  for (std::size_t c = 0; c < mesh.n_cells(); ++c) {
    const double h = mesh.h(c);
    const double xi = (z_field[c + 1] - z_field[c]) / h;
    total += flux(mesh.midpoint(c), 0.5 * (s_field[c] + s_field[c + 1]), xi) * xi * h;
  }
  return total;
}

double gradient_power(const Mesh1D& mesh, std::span<const double> z_field, double p) {
  double total = 0.0;
  const auto g = cell_gradients(mesh, z_field);
  for (std::size_t c = 0; c < g.size(); ++c) total += std::pow(std::abs(g[c]), p) * mesh.h(c);
  return total;
}

StiffnessBands linear_stiffness(const Mesh1D& mesh, const FluxLaw& linear_flux) {
  if (!linear_flux.is_linear()) throw InvalidArgument("stiffness needs a linear flux");
  const std::size_t n = mesh.n_nodes();
  StiffnessBands k{std::vector<double>(n - 1, 0.0), std::vector<double>(n, 0.0),
                   std::vector<double>(n - 1, 0.0)};
  for (std::size_t c = 0; c < mesh.n_cells(); ++c) {
    const double w = linear_flux.lambda(mesh.midpoint(c)) / mesh.h(c);
    k.diag[c] += w;
    k.diag[c + 1] += w;
    k.upper[c] -= w;
    k.lower[c] -= w;
  }
  return k;
}

}  // namespace dnstab::fem
