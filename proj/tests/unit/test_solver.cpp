#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "dnstab/errors.hpp"
#include "dnstab/monotone/presets.hpp"
#include "dnstab/solver/dump.hpp"
#include "dnstab/solver/energy.hpp"
#include "dnstab/solver/manufactured.hpp"
#include "dnstab/solver/problems.hpp"
#include "dnstab/solver/step.hpp"
#include "oracle_values.hpp"

namespace solver = dnstab::solver;
namespace problems = dnstab::solver::problems;
namespace fem = dnstab::fem;

namespace {

void expect_sine_amplitude(const fem::Mesh1D& mesh, const fem::NodalField& u, double amp,
                           double tol) {
  for (std::size_t i = 0; i < mesh.n_nodes(); ++i) {
    EXPECT_NEAR(u[i], amp * std::sin(std::numbers::pi * mesh.x(i)), tol) << "node " << i;
  }
}

}  // namespace

TEST(Solve, HeatDecaysWithDiscreteEigenvalue) {
  const auto mesh = fem::build_mesh(64);
  const auto grid = solver::TimeGrid::uniform(0.1, 100);
  const auto sol = solver::solve(problems::heat(), mesh, grid);
  expect_sine_amplitude(mesh, sol.u.back(), dnstab::oracle::kHeatAmplitude64, 1e-10);
}

TEST(Solve, HeatCoarseMatchesOracle) {
  const auto mesh = fem::build_mesh(16);
  const auto grid = solver::TimeGrid::uniform(0.1, 8);
  const auto sol = solver::solve(problems::heat(), mesh, grid);
  expect_sine_amplitude(mesh, sol.u.back(), dnstab::oracle::kHeatAmplitude16, 1e-10);
}

TEST(Solve, HeatErrorHalvesWithRefinement) {
  double previous = 0.0;
  for (std::size_t n : {16u, 32u}) {
    const auto mesh = fem::build_mesh(n);
    const double h = 1.0 / n;
    const auto grid = solver::TimeGrid::with_step(0.1, 0.4 * h * h);
    const auto sol = solver::solve(problems::heat(), mesh, grid);
    const double err = solver::manufactured_error(sol, solver::heat_exact, solver::Field::kU).sup_time_l2;
    if (previous > 0.0) EXPECT_GT(std::log2(previous / err), 1.8);
    previous = err;
  }
}

TEST(Solve, DivergenceCarriesStepIndex) {
  solver::SolverConfig config;
  config.newton_tol = 1e-300;
  config.max_newton = 2;
  config.picard_iterations = 2;
  const auto mesh = fem::build_mesh(8);
  const auto grid = solver::TimeGrid::uniform(0.1, 4);
  try {
    solver::solve(problems::stefan(), mesh, grid, config);
    FAIL() << "expected NewtonDivergence";
  } catch (const dnstab::NewtonDivergence& e) {
    EXPECT_EQ(e.step_index(), 0);
    EXPECT_FALSE(e.damping_history().empty());
  }
}

TEST(Solve, BoundaryStaysPinned) {
  const auto mesh = fem::build_mesh(32);
  const auto sol = solver::solve(problems::richards(), mesh, solver::TimeGrid::uniform(0.1, 20));
  for (const auto& slice : sol.zeta) {
    EXPECT_EQ(slice.front(), 0.0);
    EXPECT_EQ(slice.back(), 0.0);
  }
}

// tau / h^2 near 1e4: the phase front sweeps many cells in one step.
TEST(Solve, LongStepsOnFineMeshesConverge) {
  for (const char* name : {"stefan", "common-plateau"}) {
    const auto spec = problems::problem_by_name(name);
    const auto mesh = fem::Mesh1D::uniform(512);
    const auto sol = solver::solve(spec, mesh, solver::TimeGrid::uniform(spec.horizon, 10));
    const auto audit = solver::energy_audit(sol, spec);
    EXPECT_TRUE(audit.steps_ok() && audit.nonincreasing()) << name;
  }
}

TEST(Solve, EffectiveDeltaFollowsDegeneracyOfInitialRange) {
  const auto mesh = fem::build_mesh(32);
  solver::SolverConfig config;
  EXPECT_EQ(solver::effective_delta(problems::heat(), mesh, config), 0.0);
  EXPECT_EQ(solver::effective_delta(problems::stefan(), mesh, config),
            solver::SolverConfig::kAutoDelta);
  config.auto_delta = false;
  EXPECT_EQ(solver::effective_delta(problems::stefan(), mesh, config), 0.0);
  config.delta_reg = 0.01;
  EXPECT_EQ(solver::effective_delta(problems::stefan(), mesh, config), 0.01);
}

TEST(SolverConfig, ValidateRejectsNonsense) {
  solver::SolverConfig c;
  c.newton_tol = -1.0;
  EXPECT_THROW(c.validate(), dnstab::InvalidArgument);
  c = {};
  c.damping = 1.5;
  EXPECT_THROW(c.validate(), dnstab::InvalidArgument);
}

TEST(TimeGrid, RejectsNonIncreasingTimes) {
  EXPECT_THROW(solver::TimeGrid({0.0, 0.2, 0.2}), dnstab::InvalidArgument);
  const auto g = solver::TimeGrid::with_step(0.1, 0.03);
  EXPECT_DOUBLE_EQ(g.horizon(), 0.1);
  EXPECT_NEAR(g.tau(0), g.tau(g.steps() - 1), 1e-15);
}

TEST(ProblemSpec, RejectsNonPositiveHorizon) {
  EXPECT_THROW(problems::heat(-1.0).validate(), dnstab::InvalidArgument);
  EXPECT_THROW(problems::problem_by_name("nope"), dnstab::InvalidArgument);
}

TEST(SumChart, RecoversNearestPreimage) {
  const solver::SumChart chart(dnstab::monotone::presets::common_plateau());
  for (double u : {-2.0, -0.3, 1.5, 2.5, 4.0}) {
    EXPECT_NEAR(chart.recover(chart.sigma(u), 0.0), u, 1e-12) << u;
  }
  EXPECT_DOUBLE_EQ(chart.recover(0.0, 0.7), 0.7);
  EXPECT_DOUBLE_EQ(chart.recover(0.0, 3.0), 1.0);
  EXPECT_DOUBLE_EQ(chart.recover(0.0, -3.0), 0.0);
  for (double s : {-1.0, 0.5, 2.0, 6.0}) {
    EXPECT_NEAR(chart.beta()(s) + chart.zeta()(s), s, 1e-14);
  }
}

TEST(SumChart, PlateauDetection) {
  namespace presets = dnstab::monotone::presets;
  EXPECT_TRUE(solver::has_common_plateau(presets::common_plateau()));
  EXPECT_FALSE(solver::has_common_plateau(presets::stefan()));
  EXPECT_FALSE(solver::has_common_plateau(presets::step_graph()));
  EXPECT_FALSE(solver::has_common_plateau(presets::identity()));
}

TEST(StepSystem, JacobianMatchesDifferenceQuotient) {
  const auto mesh = fem::build_mesh(12);
  const auto spec = problems::richards();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> draw(-2.0, 2.0);
  std::vector<double> prev(mesh.n_nodes()), u(mesh.n_nodes()), f(mesh.n_nodes(), 0.5);
  for (std::size_t i = 1; i + 1 < u.size(); ++i) {
    prev[i] = draw(rng);
    do u[i] = draw(rng); while (std::abs(u[i] - 1.0) < 1e-3);
  }
  const solver::StepSystem sys(mesh, spec.pair, spec.flux, prev, f, 0.01);
  const auto jac = sys.jacobian(u);
  for (std::size_t j = 1; j + 1 < u.size(); ++j) {
    auto up = u, um = u;
    const double h = 1e-7;
    up[j] += h;
    um[j] -= h;
    const auto rp = sys.residual(up), rm = sys.residual(um);
    const double diag = (rp[j] - rm[j]) / (2 * h);
    EXPECT_NEAR(jac.diag[j], diag, 1e-5 * (1.0 + std::abs(diag)));
    const double lower = (rp[j + 1] - rm[j + 1]) / (2 * h);
    EXPECT_NEAR(jac.lower[j], lower, 1e-5 * (1.0 + std::abs(lower)));
  }
}

TEST(Energy, HeatAuditPassesAndEnergyDecreases) {
  const auto mesh = fem::build_mesh(32);
  const auto spec = problems::heat();
  const auto sol = solver::solve(spec, mesh, solver::TimeGrid::uniform(0.1, 50));
  const auto audit = solver::energy_audit(sol, spec);
  EXPECT_TRUE(audit.steps_ok());
  EXPECT_TRUE(audit.global_ok());
  EXPECT_TRUE(audit.nonincreasing());
  EXPECT_NEAR(audit.energy.front(), 0.25, 1e-15);
  EXPECT_TRUE(solver::check_apriori(sol, spec).passed);
}

TEST(Energy, ForcedProblemSatisfiesGlobalBalance) {
  const auto mesh = fem::build_mesh(32);
  const auto spec = problems::forced_heat();
  const auto sol = solver::solve(spec, mesh, solver::TimeGrid::uniform(0.1, 50));
  const auto audit = solver::energy_audit(sol, spec);
  EXPECT_TRUE(audit.global_ok());
  EXPECT_TRUE(solver::check_apriori(sol, spec).passed);
}

TEST(Energy, DualSobolevNormOfZeroIsZero) {
  const auto mesh = fem::build_mesh(8);
  const std::vector<double> g(mesh.n_nodes(), 0.0);
  EXPECT_EQ(solver::dual_sobolev_norm(mesh, g, 2.0), 0.0);
}

TEST(Dump, WritesHeaderAndOneRowPerSlice) {
  const auto mesh = fem::build_mesh(4);
  const auto sol = solver::solve(problems::heat(), mesh, solver::TimeGrid::uniform(0.1, 3));
  std::ostringstream out;
  solver::write_trajectory(out, sol, solver::Field::kU, {"note"});
  std::istringstream in(out.str());
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 1u + 1u + 4u);
  EXPECT_EQ(lines[0], "# note");
  EXPECT_EQ(lines[1].substr(0, 2), "t ");
}
