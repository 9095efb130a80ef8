#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dnstab/monotone/scalar_nonlinearity.hpp"

namespace dnstab::monotone {

/// Linear lower bound |F(s)| >= slope * |s| - offset.
struct Coercivity {
  double slope = 0.0;
  double offset = 0.0;
};

/// Exponent regimes for the flux exponent p in one space dimension:
/// I: p >= 2; II: 2/3 < p < 2 with beta coercive; III: 1 < p <= 2/3 with
/// beta coercive and strictly increasing.
enum class ExponentCase { kI, kII, kIII };

const char* to_string(ExponentCase c) noexcept;

/// The pair (beta, zeta) with the derived functions
///   nu(s)        = int_0^s zeta'(q) beta'(q) dq,
///   beta^r(z)    = the point of beta^{-1}(z) closest to 0,
///   B(z)         = int_0^z zeta(beta^r(y)) dy   (+inf outside the closed range),
///   B(beta(s))   = int_0^s zeta(q) beta'(q) dq.
///
/// When both members are piecewise linear every derived quantity is
/// evaluated in closed form from tables built at construction. Otherwise
/// quadrature-backed cumulative tables are used. Immutable; safe to share
/// between threads.
class NonlinearityPair {
 public:
  NonlinearityPair(ScalarNonlinearity beta, ScalarNonlinearity zeta,
                   std::optional<Coercivity> zeta_coercivity = std::nullopt,
                   std::optional<Coercivity> beta_coercivity = std::nullopt,
                   std::optional<ExponentCase> exponent_case = std::nullopt,
                   std::string name = {});

  /// Builds a pair and fills both coercivity records with the tightest
  /// admissible constants (zeta's must exist; beta's only when beta is
  /// unbounded in both directions).
  static NonlinearityPair with_fitted_coercivity(ScalarNonlinearity beta,
                                                 ScalarNonlinearity zeta,
                                                 std::string name = {});

  const ScalarNonlinearity& beta() const noexcept;
  const ScalarNonlinearity& zeta() const noexcept;
  const std::optional<Coercivity>& zeta_coercivity() const noexcept;
  const std::optional<Coercivity>& beta_coercivity() const noexcept;
  const std::optional<ExponentCase>& exponent_case() const noexcept;
  const std::string& name() const noexcept;

  double lipschitz_beta() const noexcept { return beta().lipschitz(); }
  double lipschitz_zeta() const noexcept { return zeta().lipschitz(); }

  bool piecewise_linear() const noexcept;

  double nu(double s) const;
  double nu_derivative(double s) const;

  /// Right inverse of beta. std::nullopt when z lies outside the closure of
  /// the range; +-infinity at a closure endpoint that is not attained.
  std::optional<double> beta_right_inverse(double z) const;

  /// Convex potential; +infinity outside the closure of range(beta).
  double B(double z) const;
  /// B(beta(s)) through the s-integral, independent of beta_right_inverse.
  double B_of_beta(double s) const;

  /// 4 L_beta L_zeta [B(beta(a)) + B(beta(b)) - 2 B((beta(a)+beta(b))/2)]
  ///   - (nu(a) - nu(b))^2, which is nonnegative for admissible pairs.
  double convexity_gap(double a, double b) const;

  /// (beta + delta Id, zeta + delta Id), nu rebuilt from the new members.
  NonlinearityPair regularized(double delta) const;

  /// Union of the members' kinks together with 0, sorted.
  const std::vector<double>& knots() const noexcept;

  /// True when nu' vanishes on a set of positive length inside [lo, hi].
  bool nu_degenerate_on(double lo, double hi) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

/// Tightest constants with |F(s)| >= slope |s| - offset for a
/// piecewise-linear F (slope = smaller tail slope). Smooth functions are
/// handled through their affine tails and a dense core scan.
Coercivity fit_coercivity(const ScalarNonlinearity& f);

/// Exponent case implied by p for this pair, or nullopt when p falls in a
/// regime whose extra requirements the pair does not meet.
std::optional<ExponentCase> classify_exponent(const NonlinearityPair& pair, double p);

}  // namespace dnstab::monotone
