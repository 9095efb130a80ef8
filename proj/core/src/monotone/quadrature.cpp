#include "dnstab/monotone/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dnstab/errors.hpp"

namespace dnstab::monotone {

namespace {

double integrate_piece(const std::function<double(double)>& g, double lo,
                       double hi, double abs_tol) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;
  if (hi <= lo) return 0.0;
  double error = 0.0;
  double l1 = 0.0;
  double value = Rule::integrate(g, lo, hi, 0, 0.0, &error, &l1);
  // The estimate bottoms out near rounding level; refining below it only
  // accumulates noise.
  const double floor = 16.0 * std::numeric_limits<double>::epsilon() * std::max(l1, 1.0);
  if (error > std::max(abs_tol, floor)) {
    value = Rule::integrate(g, lo, hi, 15, 1e-12, &error, &l1);
  }
  if (!(error <= std::max(abs_tol, floor + 1e-12 * l1)) || !std::isfinite(value)) {
    throw QuadratureError("adaptive quadrature on [" + std::to_string(lo) +
                              ", " + std::to_string(hi) + "] did not converge",
                          error);
  }
  return value;
}

}  // namespace

double integrate(const std::function<double(double)>& g, double a, double b,
                 std::span<const double> breaks, double abs_tol) {
  if (a == b) return 0.0;
  const double sign = b > a ? 1.0 : -1.0;
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);

  double total = 0.0;
  double left = lo;
  for (double x : breaks) {
    if (x <= left) continue;
    if (x >= hi) break;
    total += integrate_piece(g, left, x, abs_tol);
    left = x;
  }
  total += integrate_piece(g, left, hi, abs_tol);
  return sign * total;
}

CumulativeIntegral::CumulativeIntegral(std::function<double(double)> g,
                                       double lo, double hi,
                                       std::vector<double> breaks,
                                       double abs_tol, std::size_t knots)
    : g_(std::move(g)),
      lo_(std::min(lo, 0.0)),
      hi_(std::max(hi, 0.0)),
      abs_tol_(abs_tol),
      breaks_(std::move(breaks)) {
  if (knots < 1) throw InvalidArgument("cumulative table needs at least one interval");
  std::sort(breaks_.begin(), breaks_.end());
  breaks_.erase(std::unique(breaks_.begin(), breaks_.end()), breaks_.end());
  if (hi_ == lo_) hi_ = lo_ + 1.0;
  spacing_ = (hi_ - lo_) / static_cast<double>(knots);
  cumulative_.resize(knots + 1, 0.0);
  // Per-interval tolerance scaled so the accumulated table error stays
  // within abs_tol.
  const double piece_tol = abs_tol_ / static_cast<double>(knots);
  for (std::size_t k = 1; k <= knots; ++k) {
    const double a = lo_ + spacing_ * static_cast<double>(k - 1);
    const double b = k == knots ? hi_ : lo_ + spacing_ * static_cast<double>(k);
    cumulative_[k] =
        cumulative_[k - 1] + integrate(g_, a, b, breaks_, std::max(piece_tol, 1e-13));
  }
  offset_ = 0.0;
  const auto k0 = static_cast<std::size_t>(std::floor((0.0 - lo_) / spacing_));
  offset_ = integrate_from_knot(std::min(k0, cumulative_.size() - 1), 0.0);
}

double CumulativeIntegral::integrate_from_knot(std::size_t k, double s) const {
  const double knot = lo_ + spacing_ * static_cast<double>(k);
  return cumulative_[k] + integrate(g_, knot, s, breaks_, abs_tol_);
}

double CumulativeIntegral::operator()(double s) const {
  std::size_t k = 0;
  if (s >= hi_) {
    k = cumulative_.size() - 1;
  } else if (s > lo_) {
    k = std::min(static_cast<std::size_t>(std::floor((s - lo_) / spacing_)),
                 cumulative_.size() - 1);
  }
  return integrate_from_knot(k, s) - offset_;
}

}  // namespace dnstab::monotone
