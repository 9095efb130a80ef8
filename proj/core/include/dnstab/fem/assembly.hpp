#pragma once

#include <span>
#include <vector>

#include "dnstab/fem/flux_law.hpp"
#include "dnstab/fem/mesh.hpp"

namespace dnstab::fem {

/// Cell gradients (z_{c+1} - z_c) / h_c.
std::vector<double> cell_gradients(const Mesh1D& mesh, std::span<const double> z_field);

/// Entry i is the sum over cells adjacent to node i of
/// a(x_mid, s_mid, dz/h) * dphi_i/dx * h, with s_mid the cell average of
/// s_field. Rows of the two boundary nodes are zero.
NodalField assemble_flux_residual(const Mesh1D& mesh, const FluxLaw& flux,
                                  std::span<const double> s_field,
                                  std::span<const double> z_field);

/// Sum over cells of a(x_mid, s_mid, dz/h) dz/h h.
double flux_work(const Mesh1D& mesh, const FluxLaw& flux, std::span<const double> s_field,
                 std::span<const double> z_field);

/// Sum over cells of |dz/h|^p h.
double gradient_power(const Mesh1D& mesh, std::span<const double> z_field, double p);

/// Weighted stiffness matrix of -(lambda u')' with midpoint lambda, as three
/// bands (sub, diag, super) over all nodes. Boundary rows are left as
/// assembled; callers impose their own boundary treatment.
struct StiffnessBands {
  std::vector<double> lower;
  std::vector<double> diag;
  std::vector<double> upper;
};
StiffnessBands linear_stiffness(const Mesh1D& mesh, const FluxLaw& linear_flux);

}  // namespace dnstab::fem
