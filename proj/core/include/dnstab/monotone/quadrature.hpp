#pragma once

#include <functional>
#include <span>
#include <vector>

namespace dnstab::monotone {

/// Signed integral of `g` over [a, b] (negative when b < a), split at every
/// break point strictly inside the interval. Each sub-interval is integrated
/// with adaptive 15-point Gauss-Kronrod. Throws QuadratureError when the
/// estimated absolute error exceeds `abs_tol`.
double integrate(const std::function<double(double)>& g, double a, double b,
                 std::span<const double> breaks, double abs_tol);

/// Antiderivative of `g` anchored at zero, G(s) = int_0^s g, served from a
/// table of cumulative integrals at uniformly spaced knots over a core
/// interval plus a short quadrature from the nearest knot.
class CumulativeIntegral {
 public:
  static constexpr std::size_t kDefaultKnots = 10000;

  CumulativeIntegral() = default;
  CumulativeIntegral(std::function<double(double)> g, double lo, double hi,
                     std::vector<double> breaks, double abs_tol,
                     std::size_t knots = kDefaultKnots);

  double operator()(double s) const;

 private:
  double integrate_from_knot(std::size_t k, double s) const;

  std::function<double(double)> g_;
  double lo_ = 0.0;
  double hi_ = 0.0;
  double spacing_ = 0.0;
  double abs_tol_ = 1e-10;
  std::vector<double> breaks_;
  std::vector<double> cumulative_;  // int_lo^{knot k} g
  double offset_ = 0.0;             // int_lo^0 g
};

}  // namespace dnstab::monotone
