#include <gtest/gtest.h>

#include "dnstab/errors.hpp"
#include "dnstab/solver/problems.hpp"
#include "dnstab/solver/step.hpp"
#include "dnstab/stability/sweep.hpp"

namespace stab = dnstab::stability;
namespace problems = dnstab::solver::problems;

TEST(Family, KindNamesRoundTrip) {
  for (auto k : {stab::FamilyKind::kDelta, stab::FamilyKind::kMollified,
                 stab::FamilyKind::kFluxScale, stab::FamilyKind::kSourceShift,
                 stab::FamilyKind::kInitialShift, stab::FamilyKind::kBetaSlopeGrowth}) {
    EXPECT_EQ(stab::family_kind_from_string(stab::to_string(k)), k);
  }
  EXPECT_THROW(stab::family_kind_from_string("shrink"), dnstab::InvalidArgument);
}

TEST(Family, MembersApproachBase) {
  const auto fam = stab::make_family(problems::stefan(), stab::FamilyKind::kDelta, {2, 4, 8});
  ASSERT_EQ(fam.members.size(), 3u);
  EXPECT_GT(fam.members[0].zeta_distance, fam.members[2].zeta_distance);
  EXPECT_NEAR(fam.members[2].beta_distance, fam.window / 8.0, 1e-12);
  EXPECT_EQ(fam.members[1].spec.name, "stefan/delta-4");
}

TEST(Family, RejectsEmptyOrNonPositiveIndices) {
  EXPECT_THROW(stab::make_family(problems::heat(), stab::FamilyKind::kDelta, {}),
               dnstab::InvalidArgument);
  EXPECT_THROW(stab::make_family(problems::heat(), stab::FamilyKind::kDelta, {0, 2}),
               dnstab::InvalidArgument);
}

TEST(Uniformity, DeltaFamilyIsUniform) {
  const auto fam = stab::make_family(problems::stefan(), stab::FamilyKind::kDelta, {2, 4, 8, 16});
  EXPECT_TRUE(stab::check_hypothesis_uniformity(fam).passed);
}

TEST(Uniformity, SlopeGrowthBreaksTheEnvelope) {
  const auto fam =
      stab::make_family(problems::heat(), stab::FamilyKind::kBetaSlopeGrowth, {2, 4, 8});
  const auto report = stab::check_hypothesis_uniformity(fam);
  EXPECT_FALSE(report.passed);
  EXPECT_NE(report.message().find("L_beta"), std::string::npos);
}

TEST(Trend, HalvingOrNoiseFloor) {
  EXPECT_TRUE(stab::trend_flag("m", {1.0, 0.7, 0.5}, 1e-10).passed);
  EXPECT_FALSE(stab::trend_flag("m", {1.0, 0.9, 0.6}, 1e-10).passed);
  EXPECT_TRUE(stab::trend_flag("m", {0.0, 1e-12, 0.0}, 1e-10).passed);
}

TEST(Sweep, HeatDeltaFamilyConverges) {
  const auto base = problems::heat();
  const auto mesh = dnstab::fem::build_mesh(32);
  const auto grid = dnstab::solver::TimeGrid::uniform(0.1, 25);
  const auto ref = dnstab::solver::solve(base, mesh, grid);
  const auto fam = stab::make_family(base, stab::FamilyKind::kDelta, {2, 4, 8});
  stab::SweepOptions opts;
  opts.jobs = 2;
  const auto report = stab::run_sweep(fam, mesh, grid, {}, ref, opts);
  EXPECT_FALSE(report.any_failed());
  EXPECT_TRUE(report.trends_passed());
  for (const auto& row : report.rows) EXPECT_GE(row.energy_slack, -1e-9);
}

TEST(Sweep, ReferenceOnOtherGridIsRejected) {
  const auto base = problems::heat();
  const auto mesh = dnstab::fem::build_mesh(8);
  const auto ref = dnstab::solver::solve(base, mesh, dnstab::solver::TimeGrid::uniform(0.1, 5));
  const auto fam = stab::make_family(base, stab::FamilyKind::kDelta, {2});
  EXPECT_THROW(stab::run_sweep(fam, mesh, dnstab::solver::TimeGrid::uniform(0.1, 6), {}, ref),
               dnstab::GridMismatch);
}
