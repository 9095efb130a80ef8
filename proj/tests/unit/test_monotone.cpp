#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "dnstab/errors.hpp"
#include "dnstab/monotone/hypotheses.hpp"
#include "dnstab/monotone/monotone_graph.hpp"
#include "dnstab/monotone/presets.hpp"
#include "dnstab/monotone/quadrature.hpp"
#include "oracle_values.hpp"

namespace mono = dnstab::monotone;
namespace presets = dnstab::monotone::presets;

TEST(ScalarNonlinearity, RejectsInadmissibleData) {
  EXPECT_THROW(mono::ScalarNonlinearity::piecewise_linear({0.0, 1.0}, {0.0, -1.0}, 1.0, 1.0),
               dnstab::InvariantViolation);
  EXPECT_THROW(mono::ScalarNonlinearity::piecewise_linear({0.0, 1.0}, {1.0, 2.0}, 1.0, 1.0),
               dnstab::InvariantViolation);
  EXPECT_THROW(mono::ScalarNonlinearity::piecewise_linear({0.0, 1.0}, {0.0, 1.0}, -1.0, 1.0),
               dnstab::InvariantViolation);
}

TEST(ScalarNonlinearity, TruncateClampsSymmetrically) {
  EXPECT_DOUBLE_EQ(mono::truncate(2.0, 5.0), 2.0);
  EXPECT_DOUBLE_EQ(mono::truncate(2.0, -5.0), -2.0);
  EXPECT_DOUBLE_EQ(mono::truncate(2.0, 0.5), 0.5);
}

TEST(NonlinearityPair, StefanPotentialMatchesOracle) {
  const auto pair = presets::stefan();
  EXPECT_NEAR(pair.B_of_beta(-2.0), dnstab::oracle::kStefanB_M2, 1e-13);
  EXPECT_NEAR(pair.B_of_beta(0.5), dnstab::oracle::kStefanB_P05, 1e-13);
  EXPECT_NEAR(pair.B_of_beta(3.0), dnstab::oracle::kStefanB_P3, 1e-13);
  EXPECT_NEAR(pair.B(pair.beta()(3.0)), dnstab::oracle::kStefanB_P3, 1e-13);
}

TEST(NonlinearityPair, CommonPlateauNuAndPotentialMatchOracle) {
  const auto pair = presets::common_plateau();
  EXPECT_NEAR(pair.nu(-1.0), dnstab::oracle::kPlateauNu_M1, 1e-13);
  EXPECT_NEAR(pair.nu(1.5), dnstab::oracle::kPlateauNu_P15, 1e-13);
  EXPECT_NEAR(pair.nu(3.0), dnstab::oracle::kPlateauNu_P3, 1e-13);
  EXPECT_NEAR(pair.B_of_beta(-1.0), dnstab::oracle::kPlateauB_M1, 1e-13);
  EXPECT_NEAR(pair.B_of_beta(1.5), dnstab::oracle::kPlateauB_P15, 1e-13);
  EXPECT_NEAR(pair.B_of_beta(3.0), dnstab::oracle::kPlateauB_P3, 1e-13);
  EXPECT_TRUE(pair.nu_degenerate_on(0.0, 2.0));
  EXPECT_FALSE(pair.nu_degenerate_on(2.5, 3.0));
}

TEST(NonlinearityPair, RightInversePicksPointClosestToZero) {
  const auto pair = presets::step_graph();
  ASSERT_TRUE(pair.beta_right_inverse(0.0).has_value());
  EXPECT_DOUBLE_EQ(*pair.beta_right_inverse(0.0), 0.0);
  EXPECT_DOUBLE_EQ(*pair.beta_right_inverse(1.0), 1.0);
  EXPECT_FALSE(pair.beta_right_inverse(1.5).has_value());
  EXPECT_TRUE(std::isinf(pair.B(1.5)));
}

TEST(NonlinearityPair, RegularizationAddsMultipleOfIdentity) {
  const auto base = presets::stefan();
  const auto reg = base.regularized(0.1);
  for (double s : {-2.0, 0.3, 0.9, 4.0}) {
    EXPECT_NEAR(reg.beta()(s), base.beta()(s) + 0.1 * s, 1e-14);
    EXPECT_NEAR(reg.zeta()(s), base.zeta()(s) + 0.1 * s, 1e-14);
  }
  EXPECT_FALSE(reg.nu_degenerate_on(0.0, 1.0));
}

TEST(Mollify, BoxAverageMatchesOracle) {
  const auto z = mono::mollify(presets::stefan().zeta(), 0.25);
  EXPECT_NEAR(z(-0.1), dnstab::oracle::kMollifiedStefanZeta_M01, 1e-12);
  EXPECT_NEAR(z(0.2), dnstab::oracle::kMollifiedStefanZeta_P02, 1e-12);
  EXPECT_NEAR(z(1.0), dnstab::oracle::kMollifiedStefanZeta_P1, 1e-12);
  EXPECT_NEAR(z(1.1), dnstab::oracle::kMollifiedStefanZeta_P11, 1e-12);
  EXPECT_NEAR(z(2.0), dnstab::oracle::kMollifiedStefanZeta_P2, 1e-12);
  EXPECT_DOUBLE_EQ(z(0.0), 0.0);
}

TEST(Mollify, RejectsRadiusAboveHalfSpacing) {
  EXPECT_THROW(mono::mollify(presets::stefan().zeta(), 0.6), dnstab::InvalidArgument);
}

TEST(Quadrature, IntegratesAcrossBreaks) {
  const double breaks[] = {0.5};
  const double v = mono::integrate([](double x) { return std::abs(x - 0.5); }, 0.0, 1.0,
                                   breaks, 1e-13);
  EXPECT_NEAR(v, 0.25, 1e-14);
  EXPECT_NEAR(mono::integrate([](double x) { return x; }, 1.0, 0.0, {}, 1e-13), -0.5, 1e-14);
}

TEST(Quadrature, CumulativeTableMatchesClosedForm) {
  const mono::CumulativeIntegral g([](double x) { return std::cos(x); }, -5.0, 5.0, {}, 1e-12,
                                   2000);
  for (double s : {-4.3, -0.01, 0.0, 1.7, 4.99, 7.0}) EXPECT_NEAR(g(s), std::sin(s), 1e-11);
}

// Property: for every preset pair the two routes to B(beta(s)) agree and the
// inequality suite holds on random pairs of points.
class PresetPairs : public ::testing::TestWithParam<std::string> {};

TEST_P(PresetPairs, PotentialRoutesAgree) {
  const auto pair = presets::pair_by_name(GetParam());
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> draw(-10.0, 10.0);
  for (int i = 0; i < 2000; ++i) {
    const double s = draw(rng);
    EXPECT_NEAR(pair.B(pair.beta()(s)), pair.B_of_beta(s), 1e-10 * (1.0 + s * s)) << s;
  }
}

TEST_P(PresetPairs, InequalitySuiteHolds) {
  const auto pair = presets::pair_by_name(GetParam());
  const auto k = mono::fit_growth_constants(pair);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> draw(-10.0, 10.0);
  for (int i = 0; i < 2000; ++i) {
    const double a = draw(rng), b = draw(rng);
    EXPECT_GE(mono::inequality_slacks(pair, k, a, b).min(), -1e-10 * (1.0 + a * a + b * b));
  }
}

TEST_P(PresetPairs, GridValidationPasses) {
  std::vector<double> grid;
  for (int i = -20; i <= 20; ++i) grid.push_back(0.25 * i);
  const auto report = mono::verify_pair_hypotheses(presets::pair_by_name(GetParam()), grid);
  EXPECT_TRUE(report.all_passed());
}

INSTANTIATE_TEST_SUITE_P(AllPresets, PresetPairs,
                         ::testing::ValuesIn(presets::pair_names()),
                         [](const auto& info) {
                           std::string n = info.param;
                           for (auto& c : n) if (c == '-') c = '_';
                           return n;
                         });

TEST(NonlinearityPair, IdentityInequalitiesAreTightAtOneZero) {
  const auto pair = presets::identity();
  const auto k = mono::fit_growth_constants(pair);
  const auto s = mono::inequality_slacks(pair, k, 1.0, 0.0);
  EXPECT_NEAR(s.nu_zeta_lipschitz, 0.0, 1e-14);
  EXPECT_NEAR(s.nu_product, 0.0, 1e-14);
}

TEST(MonotoneGraph, ResolventRoundTripIsExact) {
  for (const auto& g : presets::graphs::all()) {
    const auto pair = mono::resolvent_decompose(g);
    EXPECT_LT(mono::hausdorff_distance(g, mono::recompose_graph(pair)), 1e-12) << g.name();
    for (double x : {-3.0, -0.5, 0.25, 0.75, 2.0}) {
      EXPECT_GE(pair.beta().derivative(x), 0.0);
      EXPECT_LE(pair.beta().derivative(x), 1.0);
      EXPECT_NEAR(pair.beta()(x) + pair.zeta()(x), x, 1e-14) << g.name();
    }
  }
}

TEST(MonotoneGraph, RejectsGapsBetweenSegments) {
  using P = mono::GraphPoint;
  EXPECT_THROW(mono::MonotoneGraph::from_segments({{P{-1, -1}, P{0, 0}}, {P{0, 1}, P{1, 2}}},
                                                  P{1, 1}, P{1, 1}),
               dnstab::InvariantViolation);
}
