#include <cmath>
#include <numbers>
#include <numeric>

#include <gtest/gtest.h>

#include "dnstab/errors.hpp"
#include "dnstab/fem/assembly.hpp"
#include "dnstab/fem/flux_law.hpp"
#include "dnstab/fem/mesh.hpp"
#include "dnstab/solver/tridiagonal.hpp"

namespace fem = dnstab::fem;

TEST(Mesh, LumpedMassSumsToLength) {
  const auto mesh = fem::build_mesh(37);
  const auto m = fem::lumped_mass(mesh);
  EXPECT_NEAR(std::accumulate(m.begin(), m.end(), 0.0), 1.0, 1e-14);
  EXPECT_DOUBLE_EQ(m.front(), 0.5 / 37.0);
  EXPECT_TRUE(mesh.is_uniform());
  EXPECT_THROW(fem::build_mesh(1), dnstab::InvalidArgument);
}

TEST(Mesh, InterpolationAndTransferAreLinearExact) {
  const auto coarse = fem::build_mesh(4);
  const auto fine = fem::build_mesh(16);
  fem::NodalField v(coarse.n_nodes());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 2.0 * coarse.x(i) - 1.0;
  EXPECT_NEAR(coarse.interpolate(v, 0.3), -0.4, 1e-15);
  const auto moved = fem::transfer(coarse, v, fine);
  for (std::size_t i = 0; i < moved.size(); ++i) EXPECT_NEAR(moved[i], 2.0 * fine.x(i) - 1.0, 1e-15);
}

TEST(Mesh, RequireNodalRejectsWrongLength) {
  const auto mesh = fem::build_mesh(4);
  const std::vector<double> bad(3, 0.0);
  EXPECT_THROW(fem::require_nodal(mesh, bad, "field"), dnstab::GridMismatch);
}

TEST(Assembly, StiffnessAnnihilatesAffineInterior) {
  const auto mesh = fem::build_mesh(8);
  const auto a = fem::linear_stiffness(mesh, fem::FluxLaw::linear(2.0));
  std::vector<double> v(mesh.n_nodes());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 3.0 * mesh.x(i) + 1.0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    const double av = a.lower[i - 1] * v[i - 1] + a.diag[i] * v[i] + a.upper[i] * v[i + 1];
    EXPECT_NEAR(av, 0.0, 1e-12);
  }
  EXPECT_NEAR(a.diag[3], 2.0 * 2.0 * 8.0, 1e-12);
}

TEST(Assembly, FluxWorkOfLinearLawIsDirichletEnergy) {
  const auto mesh = fem::build_mesh(64);
  std::vector<double> z(mesh.n_nodes()), s(mesh.n_nodes(), 0.0);
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = mesh.x(i) * mesh.x(i);
  const double work = fem::flux_work(mesh, fem::FluxLaw::linear(), s, z);
  EXPECT_NEAR(work, fem::gradient_power(mesh, z, 2.0), 1e-13);
  EXPECT_NEAR(work, 4.0 / 3.0, 1e-3);
}

TEST(Assembly, ResidualRowsVanishOnBoundary) {
  const auto mesh = fem::build_mesh(10);
  std::vector<double> z(mesh.n_nodes()), s(mesh.n_nodes(), 0.0);
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = std::sin(std::numbers::pi * mesh.x(i));
  const auto r = fem::assemble_flux_residual(mesh, fem::FluxLaw::mobility(), s, z);
  EXPECT_EQ(r.front(), 0.0);
  EXPECT_EQ(r.back(), 0.0);
}

class FluxPresets : public ::testing::TestWithParam<int> {};

fem::FluxLaw flux_preset(int i) {
  switch (i) {
    case 0: return fem::FluxLaw::linear(1.5);
    case 1: return fem::FluxLaw::mobility();
    case 2: return fem::FluxLaw::p_laplace(1.5);
    default: return fem::FluxLaw::p_laplace(3.0);
  }
}

TEST_P(FluxPresets, ProbesPassOnSeededSamples) {
  const auto flux = flux_preset(GetParam());
  const auto samples = fem::random_flux_samples(2024, 5000);
  EXPECT_TRUE(fem::flux_monotonicity_probe(flux, samples).passed);
  EXPECT_TRUE(fem::flux_coercivity_probe(flux, samples).passed);
  EXPECT_TRUE(fem::flux_growth_probe(flux, samples).passed);
}

TEST_P(FluxPresets, DerivativeMatchesDifferenceQuotient) {
  const auto flux = flux_preset(GetParam());
  for (const auto& smp : fem::random_flux_samples(7, 200, 3.0)) {
    const double h = 1e-6 * (1.0 + std::abs(smp.xi));
    const double fd = (flux(smp.x, smp.s, smp.xi + h) - flux(smp.x, smp.s, smp.xi - h)) / (2 * h);
    EXPECT_NEAR(flux.d_xi(smp.x, smp.s, smp.xi), fd, 1e-5 * (1.0 + std::abs(fd)));
  }
}

INSTANTIATE_TEST_SUITE_P(Laws, FluxPresets, ::testing::Range(0, 4));

TEST(FluxLaw, SamplesAreSeeded) {
  const auto a = fem::random_flux_samples(5, 10);
  const auto b = fem::random_flux_samples(5, 10);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].xi, b[i].xi);
}

TEST(FluxLaw, RejectsExponentAtMostOne) {
  EXPECT_THROW(fem::FluxLaw::p_laplace(1.0), dnstab::InvalidArgument);
}

TEST(Tridiagonal, SolveInvertsApply) {
  dnstab::solver::Tridiagonal t(6);
  for (std::size_t i = 0; i < 6; ++i) t.diag[i] = 4.0 + i;
  for (std::size_t i = 0; i < 5; ++i) {
    t.lower[i] = -1.0 - 0.1 * i;
    t.upper[i] = 0.5 * i - 2.0;
  }
  const std::vector<double> x{1, -2, 3, 0.5, -1, 2};
  const auto y = dnstab::solver::solve_tridiagonal(t, t.apply(x));
  for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(y[i], x[i], 1e-13);
}

TEST(Tridiagonal, SingularMatrixThrows) {
  dnstab::solver::Tridiagonal t(3);
  EXPECT_THROW(dnstab::solver::solve_tridiagonal(t, {1, 1, 1}), dnstab::InvariantViolation);
}
