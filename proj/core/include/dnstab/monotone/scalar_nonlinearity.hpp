#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace dnstab::monotone {

/// Definition of a smooth (C^1, quadrature-backed) nondecreasing function.
/// Outside [core_lo, core_hi] the function must be affine with the given
/// tail slopes; `kinks` lists points where the derivative is not smooth so
/// quadrature can split there.
struct SmoothDefinition {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  double lipschitz = 0.0;
  double core_lo = 0.0;
  double core_hi = 0.0;
  double left_slope = 0.0;
  double right_slope = 0.0;
  std::vector<double> kinks;
  double quadrature_tol = 1e-10;
};

/// A nondecreasing Lipschitz function R -> R vanishing at 0.
///
/// The canonical representation is piecewise linear with finitely many
/// breakpoints and affine tails, for which all derived quantities (nu, B,
/// the right inverse) have closed forms. A smooth mode wraps an evaluator
/// and its derivative. Instances are immutable and cheap to copy.
class ScalarNonlinearity {
 public:
  enum class Mode { kPiecewiseLinear, kSmooth };

  /// Piecewise-linear function through (breakpoints[i], values[i]) with the
  /// given slopes left of the first and right of the last breakpoint.
  static ScalarNonlinearity piecewise_linear(std::vector<double> breakpoints,
                                             std::vector<double> values,
                                             double left_slope,
                                             double right_slope);
  /// s -> slope * s.
  static ScalarNonlinearity linear(double slope = 1.0);
  static ScalarNonlinearity smooth(SmoothDefinition definition);

  double operator()(double s) const;
  /// Right derivative (slopes are right-continuous at breakpoints).
  double derivative(double s) const;

  Mode mode() const noexcept;
  bool is_piecewise_linear() const noexcept {
    return mode() == Mode::kPiecewiseLinear;
  }

  /// Largest slope.
  double lipschitz() const noexcept;
  double left_slope() const noexcept;
  double right_slope() const noexcept;
  /// Interval outside of which the function is affine.
  double core_lo() const noexcept;
  double core_hi() const noexcept;

  /// Piecewise-linear breakpoints and values (empty in smooth mode).
  std::span<const double> breakpoints() const noexcept;
  std::span<const double> values() const noexcept;
  /// Points where the derivative jumps or is non-smooth (breakpoints in
  /// piecewise-linear mode).
  std::span<const double> kinks() const noexcept;
  double quadrature_tol() const noexcept;

  /// inf and sup of the range; infinite when the matching tail slope is > 0.
  double range_inf() const noexcept;
  double range_sup() const noexcept;

  /// True when every slope (tails included) is strictly positive.
  bool strictly_increasing() const;

  /// s -> F(s) + delta * s.
  ScalarNonlinearity plus_identity(double delta) const;
  /// s -> factor * F(s), factor > 0.
  ScalarNonlinearity scaled(double factor) const;

 private:
  struct Impl;
  explicit ScalarNonlinearity(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

/// max(-k, min(s, k)), k > 0.
double truncate(double k, double s);

/// Box-kernel mollification with radius `radius` around every breakpoint of
/// a piecewise-linear function, re-anchored so the result vanishes at 0.
/// Breakpoints closer than 2 * radius are rejected.
ScalarNonlinearity mollify(const ScalarNonlinearity& f, double radius);

}  // namespace dnstab::monotone
