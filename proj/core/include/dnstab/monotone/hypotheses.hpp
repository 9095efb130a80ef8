#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dnstab/monotone/nonlinearity_pair.hpp"

namespace dnstab::monotone {

/// Constants in K1 beta(s)^2 - K2 <= B(beta(s)) <= K3 s^2.
struct GrowthConstants {
  double K1 = 0.0;
  double K2 = 0.0;
  double K3 = 0.0;
};

/// Admissible growth constants. Exact piece by piece for piecewise-linear
/// pairs (K3 and K2 are the attained suprema); sampled with tail asymptotics
/// otherwise.
GrowthConstants fit_growth_constants(const NonlinearityPair& pair);

/// Slacks of the pointwise inequality suite at (a, b). Each is >= 0 when the
/// inequality holds.
struct InequalitySlacks {
  double nu_zeta_lipschitz = 0.0;  // L_beta |zeta(a)-zeta(b)| - |nu(a)-nu(b)|
  double nu_product = 0.0;         // L_beta L_zeta dzeta dbeta - dnu^2
  double growth_lower = 0.0;       // B(beta(a)) - K1 beta(a)^2 + K2
  double growth_upper = 0.0;       // K3 a^2 - B(beta(a))
  double uniform_convexity = 0.0;  // convexity_gap(a, b)
  double min() const;
};

InequalitySlacks inequality_slacks(const NonlinearityPair& pair,
                                   const GrowthConstants& k, double a, double b);

struct HypothesisCheck {
  explicit HypothesisCheck(std::string check_name = {}) : name(std::move(check_name)) {}

  std::string name;
  bool passed = true;
  double worst_slack = 0.0;
  std::optional<double> witness_a;
  std::optional<double> witness_b;
  std::string detail;
};

struct ValidationReport {
  std::vector<HypothesisCheck> checks;
  GrowthConstants growth;
  Coercivity zeta_coercivity;
  std::optional<Coercivity> beta_coercivity;
  std::optional<ExponentCase> exponent_case;
  double L_beta = 0.0;
  double L_zeta = 0.0;

  bool all_passed() const;
  const HypothesisCheck* find(const std::string& name) const;
};

/// Checks the structural hypotheses on beta, zeta and nu over the sample
/// grid and the inequality suite on every ordered pair of grid points. When
/// `p` is given the exponent case is classified as well.
ValidationReport verify_pair_hypotheses(const NonlinearityPair& pair,
                                        std::span<const double> grid,
                                        std::optional<double> p = std::nullopt,
                                        double tolerance = 1e-10);

}  // namespace dnstab::monotone
