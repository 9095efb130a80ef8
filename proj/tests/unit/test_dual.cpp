#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "dnstab/dual/dual.hpp"
#include "dnstab/errors.hpp"
#include "dnstab/solver/problems.hpp"
#include "dnstab/solver/step.hpp"
#include "oracle_values.hpp"

namespace dual = dnstab::dual;
namespace fem = dnstab::fem;
using dnstab::solver::TimeGrid;

TEST(Dual, EnergyConstantMatchesOracle) {
  EXPECT_NEAR(dual::energy_constant(1.0, 1.0, 0.1), dnstab::oracle::kEnergyConstantUnit, 1e-14);
  EXPECT_NEAR(dual::energy_constant(0.5, 2.0, 1.0), dnstab::oracle::kEnergyConstantHetero,
              1e-13);
  EXPECT_THROW(dual::energy_constant(0.0, 1.0, 1.0), dnstab::InvalidArgument);
}

TEST(Dual, RegularizedRatiosStayBelowEps) {
  for (double eps : {0.2, 0.1, 0.05}) {
    for (int i = 0; i <= 1000; ++i) {
      const double q = i / 1000.0;
      const auto r = dual::q_ratios(q, eps);
      EXPECT_LE(r.below, eps * (1 + 1e-12));
      EXPECT_LE(r.above, eps * (1 + 1e-12));
      const double qe = dual::regularize_q(q, eps);
      EXPECT_GE(qe, eps - 1e-15);
      EXPECT_LE(qe, 1.0 - eps + 1e-15);
    }
  }
}

TEST(Dual, ModalBackwardSolveMatchesOracle) {
  const auto mesh = fem::build_mesh(32);
  const auto grid = TimeGrid::uniform(0.1, 20);
  dual::DualProblemSpec spec{dual::sample(mesh, grid, [](double, double) { return 0.5; }),
                             fem::FluxLaw::linear(),
                             [](double x, double t) { return t * std::sin(std::numbers::pi * x); },
                             0.25};
  const auto sol = dual::solve_dual_backward(spec, mesh, grid);
  for (std::size_t i = 0; i < mesh.n_nodes(); ++i) {
    EXPECT_NEAR(sol.psi[0][i],
                dnstab::oracle::kDualAmplitude0 * std::sin(std::numbers::pi * mesh.x(i)), 1e-14);
  }
  for (double r : sol.residuals) EXPECT_LE(r, 1e-10);
  const auto e = dual::dual_energy_check(sol, spec);
  EXPECT_NEAR(e.lhs, dnstab::oracle::kDualEnergyLhs, 1e-15);
  EXPECT_TRUE(e.passed());
}

TEST(Dual, RejectsCoefficientOutsideRange) {
  const auto mesh = fem::build_mesh(8);
  const auto grid = TimeGrid::uniform(0.1, 4);
  dual::DualProblemSpec spec{dual::sample(mesh, grid, [](double, double) { return 0.01; }),
                             fem::FluxLaw::linear(), dual::sine_bump(0.1), 0.1};
  EXPECT_THROW(dual::solve_dual_backward(spec, mesh, grid), dnstab::InvalidArgument);
  spec.g = dual::sample(mesh, grid, [](double, double) { return 0.5; });
  spec.flux = fem::FluxLaw::mobility();
  EXPECT_THROW(dual::solve_dual_backward(spec, mesh, grid), dnstab::InvalidArgument);
}

TEST(Dual, UdQOfIdenticalSolutionsVanishes) {
  const auto mesh = fem::build_mesh(16);
  const auto grid = TimeGrid::uniform(0.1, 10);
  const auto sol = dnstab::solver::solve(dnstab::solver::problems::heat(), mesh, grid);
  const auto uq = dual::compute_ud_q(sol, sol);
  for (const auto& slice : uq.ud)
    for (double v : slice) EXPECT_EQ(v, 0.0);
  const auto rows = dual::uniqueness_witness(sol, sol, fem::FluxLaw::linear(),
                                             dual::sine_bump(0.1), {0.2, 0.1});
  for (const auto& r : rows) {
    EXPECT_EQ(r.witness, 0.0);
    EXPECT_LE(r.energy_lhs, r.energy_rhs);
  }
}

TEST(Dual, WitnessStaysBelowBoundForDifferentData) {
  const auto mesh = fem::build_mesh(16);
  const auto grid = TimeGrid::uniform(0.1, 10);
  const auto a = dnstab::solver::solve(dnstab::solver::problems::heat(), mesh, grid);
  const auto b = dnstab::solver::solve(dnstab::solver::problems::forced_heat(), mesh, grid);
  const auto rows = dual::uniqueness_witness(a, b, fem::FluxLaw::linear(), dual::sine_bump(0.1),
                                             {0.2, 0.1, 0.05});
  for (const auto& r : rows) {
    EXPECT_LE(r.energy_lhs, r.energy_rhs);
    EXPECT_GT(r.ud_norm, 0.0);
  }
}

TEST(Dual, MismatchedGridsAreRejected) {
  const auto mesh = fem::build_mesh(8);
  const auto a = dnstab::solver::solve(dnstab::solver::problems::heat(), mesh, TimeGrid::uniform(0.1, 4));
  const auto b = dnstab::solver::solve(dnstab::solver::problems::heat(), mesh, TimeGrid::uniform(0.1, 5));
  EXPECT_THROW(dual::compute_ud_q(a, b), dnstab::GridMismatch);
}
