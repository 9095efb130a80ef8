#include "dnstab/monotone/scalar_nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dnstab/errors.hpp"

namespace dnstab::monotone {

struct ScalarNonlinearity::Impl {
  Mode mode = Mode::kPiecewiseLinear;

  // Piecewise-linear data.
  std::vector<double> breakpoints;
  std::vector<double> values;
  std::vector<double> slopes;  // slopes[i] on [b_i, b_{i+1}]

  // Smooth data.
  SmoothDefinition smooth;

  double left_slope = 0.0;
  double right_slope = 0.0;
  double lipschitz = 0.0;
  double core_lo = 0.0;
  double core_hi = 0.0;
  std::vector<double> kinks;
  double quadrature_tol = 1e-10;
};

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool condition, const std::string& message) {
  if (!condition) throw InvariantViolation(message);
}

}  // namespace

ScalarNonlinearity::ScalarNonlinearity(std::shared_ptr<const Impl> impl)
    : impl_(std::move(impl)) {}

ScalarNonlinearity ScalarNonlinearity::piecewise_linear(
    std::vector<double> breakpoints, std::vector<double> values,
    double left_slope, double right_slope) {
  require(!breakpoints.empty(), "piecewise-linear function needs a breakpoint");
  require(breakpoints.size() == values.size(),
          "breakpoint and value lists differ in length");
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    require(std::isfinite(breakpoints[i]) && std::isfinite(values[i]),
            "breakpoints and values must be finite");
  }
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    require(breakpoints[i] > breakpoints[i - 1],
            "breakpoints must be strictly increasing");
  }
  require(left_slope >= 0.0 && right_slope >= 0.0,
          "tail slopes must be nonnegative");

  auto impl = std::make_shared<Impl>();
  impl->mode = Mode::kPiecewiseLinear;
  impl->left_slope = left_slope;
  impl->right_slope = right_slope;
  impl->lipschitz = std::max(left_slope, right_slope);
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double slope =
        (values[i + 1] - values[i]) / (breakpoints[i + 1] - breakpoints[i]);
    if (slope < 0.0) {
      std::ostringstream os;
      os << "function decreases on [" << breakpoints[i] << ", "
         << breakpoints[i + 1] << "]";
      throw InvariantViolation(os.str());
    }
    impl->slopes.push_back(slope);
    impl->lipschitz = std::max(impl->lipschitz, slope);
  }
  impl->core_lo = breakpoints.front();
  impl->core_hi = breakpoints.back();
  impl->kinks = breakpoints;
  impl->breakpoints = std::move(breakpoints);
  impl->values = std::move(values);
  require(impl->lipschitz > 0.0, "function is identically constant");

  ScalarNonlinearity f(std::move(impl));
  const double at_zero = f(0.0);
  double scale = 1.0;
  for (double v : f.values()) scale = std::max(scale, std::abs(v));
  if (std::abs(at_zero) > 1e-14 * scale) {
    std::ostringstream os;
    os << "function does not vanish at 0 (value " << at_zero << ")";
    throw InvariantViolation(os.str());
  }
  return f;
}

ScalarNonlinearity ScalarNonlinearity::linear(double slope) {
  return piecewise_linear({0.0}, {0.0}, slope, slope);
}

ScalarNonlinearity ScalarNonlinearity::smooth(SmoothDefinition definition) {
  require(static_cast<bool>(definition.value) &&
              static_cast<bool>(definition.derivative),
          "smooth function needs an evaluator and a derivative");
  require(definition.core_lo <= definition.core_hi, "empty core interval");
  require(definition.left_slope >= 0.0 && definition.right_slope >= 0.0,
          "tail slopes must be nonnegative");
  require(definition.lipschitz > 0.0, "Lipschitz constant must be positive");
  require(definition.quadrature_tol > 0.0, "quadrature tolerance must be positive");

  // Sampled validation of monotonicity, the Lipschitz bound and F(0) = 0.
  const double lo = definition.core_lo - 1.0;
  const double hi = definition.core_hi + 1.0;
  constexpr int kSamples = 2001;
  double previous = definition.value(lo);
  for (int i = 1; i < kSamples; ++i) {
    const double s = lo + (hi - lo) * i / (kSamples - 1);
    const double v = definition.value(s);
    const double step = (hi - lo) / (kSamples - 1);
    require(v >= previous - 1e-12, "smooth function is not nondecreasing");
    require(v - previous <= definition.lipschitz * step * (1.0 + 1e-9) + 1e-14,
            "smooth function violates its declared Lipschitz constant");
    previous = v;
  }
  require(std::abs(definition.value(0.0)) <= 1e-12,
          "smooth function does not vanish at 0");

  auto impl = std::make_shared<Impl>();
  impl->mode = Mode::kSmooth;
  impl->left_slope = definition.left_slope;
  impl->right_slope = definition.right_slope;
  impl->lipschitz = definition.lipschitz;
  impl->core_lo = definition.core_lo;
  impl->core_hi = definition.core_hi;
  impl->kinks = definition.kinks;
  std::sort(impl->kinks.begin(), impl->kinks.end());
  impl->quadrature_tol = definition.quadrature_tol;
  impl->smooth = std::move(definition);
  return ScalarNonlinearity(std::move(impl));
}

double ScalarNonlinearity::operator()(double s) const {
  const Impl& f = *impl_;
  if (f.mode == Mode::kSmooth) {
    if (s < f.core_lo) return f.smooth.value(f.core_lo) + f.left_slope * (s - f.core_lo);
    if (s > f.core_hi) return f.smooth.value(f.core_hi) + f.right_slope * (s - f.core_hi);
    return f.smooth.value(s);
  }
  const auto& b = f.breakpoints;
  if (s <= b.front()) return f.values.front() + f.left_slope * (s - b.front());
  if (s >= b.back()) return f.values.back() + f.right_slope * (s - b.back());
  const auto it = std::upper_bound(b.begin(), b.end(), s);
  const auto i = static_cast<std::size_t>(it - b.begin()) - 1;
  return f.values[i] + f.slopes[i] * (s - b[i]);
}

double ScalarNonlinearity::derivative(double s) const {
  const Impl& f = *impl_;
  if (f.mode == Mode::kSmooth) {
    if (s < f.core_lo) return f.left_slope;
    if (s > f.core_hi) return f.right_slope;
    return f.smooth.derivative(s);
  }
  const auto& b = f.breakpoints;
  if (s < b.front()) return f.left_slope;
  if (s >= b.back()) return f.right_slope;
  const auto it = std::upper_bound(b.begin(), b.end(), s);
  return f.slopes[static_cast<std::size_t>(it - b.begin()) - 1];
}

ScalarNonlinearity::Mode ScalarNonlinearity::mode() const noexcept { return impl_->mode; }
double ScalarNonlinearity::lipschitz() const noexcept { return impl_->lipschitz; }
double ScalarNonlinearity::left_slope() const noexcept { return impl_->left_slope; }
double ScalarNonlinearity::right_slope() const noexcept { return impl_->right_slope; }
double ScalarNonlinearity::core_lo() const noexcept { return impl_->core_lo; }
double ScalarNonlinearity::core_hi() const noexcept { return impl_->core_hi; }
std::span<const double> ScalarNonlinearity::breakpoints() const noexcept { return impl_->breakpoints; }
std::span<const double> ScalarNonlinearity::values() const noexcept { return impl_->values; }
std::span<const double> ScalarNonlinearity::kinks() const noexcept { return impl_->kinks; }
double ScalarNonlinearity::quadrature_tol() const noexcept { return impl_->quadrature_tol; }

double ScalarNonlinearity::range_inf() const noexcept {
  if (impl_->left_slope > 0.0) return -kInf;
  return (*this)(impl_->core_lo);
}

double ScalarNonlinearity::range_sup() const noexcept {
  if (impl_->right_slope > 0.0) return kInf;
  return (*this)(impl_->core_hi);
}

bool ScalarNonlinearity::strictly_increasing() const {
  const Impl& f = *impl_;
  if (f.left_slope <= 0.0 || f.right_slope <= 0.0) return false;
  if (f.mode == Mode::kPiecewiseLinear) {
    return std::all_of(f.slopes.begin(), f.slopes.end(),
                       [](double c) { return c > 0.0; });
  }
  constexpr int kSamples = 4001;
  for (int i = 0; i < kSamples; ++i) {
    const double s = f.core_lo + (f.core_hi - f.core_lo) * i / (kSamples - 1);
    if (f.smooth.derivative(s) <= 0.0) return false;
  }
  return true;
}

ScalarNonlinearity ScalarNonlinearity::plus_identity(double delta) const {
  if (delta < 0.0) throw InvalidArgument("regularization must be nonnegative");
  if (delta == 0.0) return *this;
  const Impl& f = *impl_;
  if (f.mode == Mode::kPiecewiseLinear) {
    std::vector<double> values = f.values;
    for (std::size_t i = 0; i < values.size(); ++i) values[i] += delta * f.breakpoints[i];
    return piecewise_linear(f.breakpoints, std::move(values),
                            f.left_slope + delta, f.right_slope + delta);
  }
  SmoothDefinition d = f.smooth;
  auto value = d.value;
  auto derivative = d.derivative;
  d.value = [value, delta](double s) { return value(s) + delta * s; };
  d.derivative = [derivative, delta](double s) { return derivative(s) + delta; };
  d.lipschitz += delta;
  d.left_slope += delta;
  d.right_slope += delta;
  return smooth(std::move(d));
}

ScalarNonlinearity ScalarNonlinearity::scaled(double factor) const {
  if (!(factor > 0.0)) throw InvalidArgument("scale factor must be positive");
  const Impl& f = *impl_;
  if (f.mode == Mode::kPiecewiseLinear) {
    std::vector<double> values = f.values;
    for (double& v : values) v *= factor;
    return piecewise_linear(f.breakpoints, std::move(values),
                            f.left_slope * factor, f.right_slope * factor);
  }
  SmoothDefinition d = f.smooth;
  auto value = d.value;
  auto derivative = d.derivative;
  d.value = [value, factor](double s) { return factor * value(s); };
  d.derivative = [derivative, factor](double s) { return factor * derivative(s); };
  d.lipschitz *= factor;
  d.left_slope *= factor;
  d.right_slope *= factor;
  return smooth(std::move(d));
}

double truncate(double k, double s) {
  if (!(k > 0.0)) throw InvalidArgument("truncation level must be positive");
  return std::max(-k, std::min(s, k));
}

ScalarNonlinearity mollify(const ScalarNonlinearity& f, double radius) {
  if (!f.is_piecewise_linear()) {
    throw InvalidArgument("mollification expects a piecewise-linear function");
  }
  if (!(radius > 0.0)) throw InvalidArgument("mollification radius must be positive");
  const std::vector<double> b(f.breakpoints().begin(), f.breakpoints().end());
  for (std::size_t i = 1; i < b.size(); ++i) {
    if (b[i] - b[i - 1] < 2.0 * radius) {
      std::ostringstream os;
      os << "mollification radius " << radius
         << " exceeds half the breakpoint spacing " << b[i] - b[i - 1];
      throw InvalidArgument(os.str());
    }
  }
  // Slope jump at each breakpoint.
  std::vector<double> jumps(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double before = f.derivative(b[i] - 0.5 * radius);
    const double after = f.derivative(b[i]);
    jumps[i] = after - before;
  }
  const double r = radius;
  auto bump = [b, jumps, r](double s) {
    double total = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
      const double d = std::abs(s - b[i]);
      if (d < r) total += jumps[i] * (r - d) * (r - d) / (4.0 * r);
    }
    return total;
  };
  auto bump_derivative = [b, jumps, r](double s) {
    double total = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
      const double d = std::abs(s - b[i]);
      if (d < r) {
        const double sign = s >= b[i] ? 1.0 : -1.0;
        total -= jumps[i] * (r - d) * sign / (2.0 * r);
      }
    }
    return total;
  };
  const double shift = bump(0.0);

  SmoothDefinition d;
  d.value = [f, bump, shift](double s) { return f(s) + bump(s) - shift; };
  d.derivative = [f, bump_derivative](double s) {
    return f.derivative(s) + bump_derivative(s);
  };
  d.lipschitz = f.lipschitz();
  d.core_lo = b.front() - r;
  d.core_hi = b.back() + r;
  d.left_slope = f.left_slope();
  d.right_slope = f.right_slope();
  for (double x : b) {
    d.kinks.push_back(x - r);
    d.kinks.push_back(x);
    d.kinks.push_back(x + r);
  }
  return ScalarNonlinearity::smooth(std::move(d));
}

}  // namespace dnstab::monotone
