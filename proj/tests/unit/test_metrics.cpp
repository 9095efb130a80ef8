#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "dnstab/errors.hpp"
#include "dnstab/metrics/distances.hpp"
#include "dnstab/metrics/translates.hpp"
#include "oracle_values.hpp"

namespace metrics = dnstab::metrics;
namespace fem = dnstab::fem;
using dnstab::solver::TimeGrid;

namespace {

fem::NodalField sine(const fem::Mesh1D& mesh, double amp = 1.0) {
  fem::NodalField v(mesh.n_nodes());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = amp * std::sin(std::numbers::pi * mesh.x(i));
  return v;
}

}  // namespace

TEST(SineFamily, OrthonormalOnFineUniformMesh) {
  const metrics::SineFamily fam(20);
  EXPECT_LT(fam.orthonormality_defect(fem::build_mesh(64)), 1e-13);
  EXPECT_DOUBLE_EQ(fam.weight(3), 0.125);
}

TEST(Distances, WeakMetricOfSineMatchesOracle) {
  const auto mesh = fem::build_mesh(64);
  const metrics::Trajectory a{sine(mesh)}, b{fem::NodalField(mesh.n_nodes(), 0.0)};
  EXPECT_NEAR(metrics::weak_uniform_metric(mesh, a, b), dnstab::oracle::kWeakMetricSine, 1e-14);
}

TEST(Distances, WeakMetricIsDominatedBySupL2) {
  const auto mesh = fem::build_mesh(64);
  const metrics::SineFamily fam;
  for (double amp : {1e-3, 0.1, 0.5}) {
    const metrics::Trajectory a{sine(mesh, amp)}, b{fem::NodalField(mesh.n_nodes(), 0.0)};
    EXPECT_LE(metrics::weak_uniform_metric(mesh, a, b, fam),
              fam.weight_norm_sum() * metrics::sup_time_l2(mesh, a, b) + 1e-15);
  }
}

TEST(Distances, SupL2OfSineIsRootHalf) {
  const auto mesh = fem::build_mesh(32);
  const metrics::Trajectory a{sine(mesh), sine(mesh, 2.0)};
  const metrics::Trajectory b(2, fem::NodalField(mesh.n_nodes(), 0.0));
  EXPECT_NEAR(metrics::sup_time_l2(mesh, a, b), 2.0 * std::sqrt(0.5), 1e-14);
}

TEST(Distances, W1pGapMatchesOracle) {
  const auto mesh = fem::build_mesh(16);
  const auto grid = TimeGrid::uniform(1.0, 4);
  const metrics::Trajectory a(5, sine(mesh));
  const metrics::Trajectory b(5, fem::NodalField(mesh.n_nodes(), 0.0));
  EXPECT_NEAR(metrics::lp_w1p_gap(mesh, grid, a, b, 2.0), dnstab::oracle::kW1pGapSine16, 1e-13);
  EXPECT_NEAR(metrics::lp_w1p_gap(mesh, grid, a, b, 3.0), dnstab::oracle::kW1pGapSine16P3, 1e-13);
}

TEST(Distances, AlignInterpolatesCoarseOntoFine) {
  const auto coarse = fem::build_mesh(8), fine = fem::build_mesh(32);
  const metrics::Trajectory a{sine(coarse)}, b{sine(fine)};
  const auto aligned = metrics::align(coarse, a, fine, b);
  EXPECT_EQ(aligned.mesh.n_nodes(), fine.n_nodes());
  EXPECT_LT(metrics::sup_time_l2(aligned.mesh, aligned.a, aligned.b), 0.02);
  const metrics::Trajectory c{sine(fine), sine(fine)};
  EXPECT_THROW(metrics::align(coarse, a, fine, c), dnstab::GridMismatch);
}

TEST(Translates, ConstantTrajectoryGivesSquareRootLaw) {
  // X = sin(pi x) on (0, 1), zero outside: |X(. + s) - X|^2 = 2 s |X|^2 = s.
  const auto mesh = fem::build_mesh(32);
  const auto grid = TimeGrid::uniform(1.0, 64);
  const std::vector<fem::NodalField> traj(65, sine(mesh));
  for (std::size_t j : {1u, 4u, 16u}) {
    const double s = j / 64.0;
    EXPECT_NEAR(metrics::time_translate_norm(mesh, grid, traj, j), std::sqrt(s), 1e-12);
  }
  const auto profile = metrics::time_translate_profile(mesh, grid, traj, {1, 2, 4, 8});
  ASSERT_TRUE(profile.exponent.has_value());
  EXPECT_NEAR(*profile.exponent, 0.5, 1e-10);
}

TEST(Translates, ZeroTrajectoryHasNoExponent) {
  const auto mesh = fem::build_mesh(8);
  const auto grid = TimeGrid::uniform(1.0, 8);
  const std::vector<fem::NodalField> traj(9, fem::NodalField(mesh.n_nodes(), 0.0));
  EXPECT_FALSE(metrics::time_translate_profile(mesh, grid, traj, {1, 2, 4}).exponent);
}
