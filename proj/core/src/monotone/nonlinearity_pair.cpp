#include "dnstab/monotone/nonlinearity_pair.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dnstab/errors.hpp"
#include "dnstab/monotone/quadrature.hpp"

namespace dnstab::monotone {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Coercivity offset required by F for a given slope: max over the knots of
// slope |s| - |F(s)|. Exact for piecewise-linear F whose tail slopes are at
// least `slope`.
double required_offset(const ScalarNonlinearity& f, double slope) {
  double offset = 0.0;
  auto visit = [&](double s) {
    offset = std::max(offset, slope * std::abs(s) - std::abs(f(s)));
  };
  visit(0.0);
  if (f.is_piecewise_linear()) {
    for (double b : f.breakpoints()) visit(b);
  } else {
    constexpr int kSamples = 20001;
    const double lo = f.core_lo();
    const double hi = f.core_hi();
    for (int i = 0; i < kSamples; ++i) visit(lo + (hi - lo) * i / (kSamples - 1));
  }
  return offset;
}

std::vector<double> merged_knots(const ScalarNonlinearity& beta,
                                 const ScalarNonlinearity& zeta) {
  std::vector<double> knots{0.0};
  knots.insert(knots.end(), beta.kinks().begin(), beta.kinks().end());
  knots.insert(knots.end(), zeta.kinks().begin(), zeta.kinks().end());
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  return knots;
}

}  // namespace

const char* to_string(ExponentCase c) noexcept {
  switch (c) {
    case ExponentCase::kI: return "I";
    case ExponentCase::kII: return "II";
    case ExponentCase::kIII: return "III";
  }
  return "?";
}

Coercivity fit_coercivity(const ScalarNonlinearity& f) {
  Coercivity c;
  c.slope = std::min(f.left_slope(), f.right_slope());
  c.offset = required_offset(f, c.slope);
  return c;
}

struct NonlinearityPair::Impl {
  ScalarNonlinearity beta;
  ScalarNonlinearity zeta;
  std::optional<Coercivity> zeta_coercivity;
  std::optional<Coercivity> beta_coercivity;
  std::optional<ExponentCase> exponent_case;
  std::string name;

  bool piecewise_linear = false;
  std::vector<double> knots;
  std::size_t zero_index = 0;

  // Closed-form tables (piecewise-linear pairs).
  std::vector<double> beta_at;   // beta(k_i)
  std::vector<double> zeta_at;   // zeta(k_i)
  std::vector<double> cb;        // beta slope on [k_i, k_{i+1}]
  std::vector<double> cz;        // zeta slope on [k_i, k_{i+1}]
  double cb_left = 0.0, cz_left = 0.0, cb_right = 0.0, cz_right = 0.0;
  std::vector<double> nu_at;     // nu(k_i)
  std::vector<double> bb_at;     // B(beta(k_i)) via the s-integral
  std::vector<double> bz_at;     // B(beta(k_i)) via the z-integral

  // Quadrature-backed antiderivatives (smooth pairs).
  CumulativeIntegral nu_table;
  CumulativeIntegral bb_table;
  double quadrature_tol = 1e-10;

  Impl(ScalarNonlinearity b, ScalarNonlinearity z) : beta(std::move(b)), zeta(std::move(z)) {}

  void build_piecewise_tables();
  void build_quadrature_tables();

  // Piece lookup: returns anchor knot index and slopes for s.
  struct Piece {
    double anchor;
    double beta0;
    double zeta0;
    double cb;
    double cz;
    double nu0;
    double bb0;
  };
  Piece piece(double s) const;

  std::optional<double> right_inverse_exact(double z) const;
  double B_exact(double z) const;
  std::optional<double> right_inverse_bisect(double z) const;
  double B_quadrature(double z) const;
};

void NonlinearityPair::Impl::build_piecewise_tables() {
  const std::size_t n = knots.size();
  beta_at.resize(n);
  zeta_at.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    beta_at[i] = beta(knots[i]);
    zeta_at[i] = zeta(knots[i]);
  }
  cb.assign(n > 0 ? n - 1 : 0, 0.0);
  cz.assign(cb.size(), 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = knots[i + 1] - knots[i];
    cb[i] = (beta_at[i + 1] - beta_at[i]) / h;
    cz[i] = (zeta_at[i + 1] - zeta_at[i]) / h;
  }
  cb_left = beta.left_slope();
  cz_left = zeta.left_slope();
  cb_right = beta.right_slope();
  cz_right = zeta.right_slope();

  nu_at.assign(n, 0.0);
  bb_at.assign(n, 0.0);
  bz_at.assign(n, 0.0);
  const std::size_t i0 = zero_index;
  for (std::size_t i = i0 + 1; i < n; ++i) {
    const double h = knots[i] - knots[i - 1];
    nu_at[i] = nu_at[i - 1] + cz[i - 1] * cb[i - 1] * h;
    bb_at[i] = bb_at[i - 1] + cb[i - 1] * (zeta_at[i - 1] * h + 0.5 * cz[i - 1] * h * h);
    bz_at[i] = bz_at[i - 1] +
               0.5 * (beta_at[i] - beta_at[i - 1]) * (zeta_at[i - 1] + zeta_at[i]);
  }
  for (std::size_t i = i0; i-- > 0;) {
    const double h = knots[i + 1] - knots[i];
    nu_at[i] = nu_at[i + 1] - cz[i] * cb[i] * h;
    bb_at[i] = bb_at[i + 1] - cb[i] * (zeta_at[i] * h + 0.5 * cz[i] * h * h);
    bz_at[i] = bz_at[i + 1] -
               0.5 * (beta_at[i + 1] - beta_at[i]) * (zeta_at[i] + zeta_at[i + 1]);
  }
}

void NonlinearityPair::Impl::build_quadrature_tables() {
  quadrature_tol = std::min(beta.quadrature_tol(), zeta.quadrature_tol());
  const double lo = std::min(beta.core_lo(), zeta.core_lo());
  const double hi = std::max(beta.core_hi(), zeta.core_hi());
  const ScalarNonlinearity b = beta;
  const ScalarNonlinearity z = zeta;
  nu_table = CumulativeIntegral(
      [b, z](double q) { return z.derivative(q) * b.derivative(q); }, lo, hi,
      knots, quadrature_tol);
  bb_table = CumulativeIntegral(
      [b, z](double q) { return z(q) * b.derivative(q); }, lo, hi, knots,
      quadrature_tol);
}

NonlinearityPair::Impl::Piece NonlinearityPair::Impl::piece(double s) const {
  const std::size_t n = knots.size();
  if (s <= knots.front()) {
    return {knots.front(), beta_at.front(), zeta_at.front(), cb_left, cz_left,
            nu_at.front(), bb_at.front()};
  }
  if (s >= knots.back()) {
    return {knots.back(), beta_at.back(), zeta_at.back(), cb_right, cz_right,
            nu_at.back(), bb_at.back()};
  }
  const auto it = std::upper_bound(knots.begin(), knots.end(), s);
  const auto i = std::min(static_cast<std::size_t>(it - knots.begin()) - 1, n - 2);
  return {knots[i], beta_at[i], zeta_at[i], cb[i], cz[i], nu_at[i], bb_at[i]};
}

std::optional<double> NonlinearityPair::Impl::right_inverse_exact(double z) const {
  if (z == 0.0) return 0.0;
  const std::size_t n = knots.size();
  const std::size_t i0 = zero_index;
  if (z > 0.0) {
    const auto first = beta_at.begin() + static_cast<std::ptrdiff_t>(i0) + 1;
    const auto it = std::lower_bound(first, beta_at.end(), z);
    if (it == beta_at.end()) {
      if (cb_right <= 0.0) return std::nullopt;
      return knots.back() + (z - beta_at.back()) / cb_right;
    }
    const auto i = static_cast<std::size_t>(it - beta_at.begin());
    if (beta_at[i] == z) return knots[i];
    return knots[i - 1] + (z - beta_at[i - 1]) / cb[i - 1];
  }
  const auto last = beta_at.begin() + static_cast<std::ptrdiff_t>(i0);
  const auto it = std::upper_bound(beta_at.begin(), last, z);
  if (it == beta_at.begin()) {
    if (cb_left <= 0.0) return std::nullopt;
    return knots.front() + (z - beta_at.front()) / cb_left;
  }
  const auto i = static_cast<std::size_t>(it - beta_at.begin()) - 1;
  (void)n;
  if (beta_at[i] == z) return knots[i];
  return knots[i] + (z - beta_at[i]) / cb[i];
}

double NonlinearityPair::Impl::B_exact(double z) const {
  if (z == 0.0) return 0.0;
  const std::size_t i0 = zero_index;
  if (z > 0.0) {
    const auto first = beta_at.begin() + static_cast<std::ptrdiff_t>(i0) + 1;
    const auto it = std::lower_bound(first, beta_at.end(), z);
    if (it == beta_at.end()) {
      if (cb_right <= 0.0) return kInf;
      const double dz = z - beta_at.back();
      const double zeta_z = zeta_at.back() + cz_right * dz / cb_right;
      return bz_at.back() + 0.5 * dz * (zeta_at.back() + zeta_z);
    }
    const auto i = static_cast<std::size_t>(it - beta_at.begin());
    const double width = beta_at[i] - beta_at[i - 1];
    const double w = (z - beta_at[i - 1]) / width;
    const double zeta_z = zeta_at[i - 1] + w * (zeta_at[i] - zeta_at[i - 1]);
    return bz_at[i - 1] + 0.5 * (z - beta_at[i - 1]) * (zeta_at[i - 1] + zeta_z);
  }
  const auto last = beta_at.begin() + static_cast<std::ptrdiff_t>(i0);
  const auto it = std::upper_bound(beta_at.begin(), last, z);
  if (it == beta_at.begin()) {
    if (cb_left <= 0.0) return kInf;
    const double dz = beta_at.front() - z;
    const double zeta_z = zeta_at.front() - cz_left * dz / cb_left;
    return bz_at.front() - 0.5 * dz * (zeta_z + zeta_at.front());
  }
  const auto i = static_cast<std::size_t>(it - beta_at.begin()) - 1;
  const double width = beta_at[i + 1] - beta_at[i];
  const double w = (z - beta_at[i]) / width;
  const double zeta_z = zeta_at[i] + w * (zeta_at[i + 1] - zeta_at[i]);
  return bz_at[i + 1] - 0.5 * (beta_at[i + 1] - z) * (zeta_z + zeta_at[i + 1]);
}

std::optional<double> NonlinearityPair::Impl::right_inverse_bisect(double z) const {
  if (z == 0.0) return 0.0;
  const double sup = beta.range_sup();
  const double inf = beta.range_inf();
  if (z > sup || z < inf) return std::nullopt;
  if (z > 0.0) {
    // Bracket [0, t] with beta(t) >= z, then shrink to inf{t : beta(t) >= z}.
    double hi = std::max(1.0, beta.core_hi());
    while (beta(hi) < z) hi *= 2.0;
    double lo = 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (beta(mid) >= z) hi = mid; else lo = mid;
    }
    return hi;
  }
  double lo = std::min(-1.0, beta.core_lo());
  while (beta(lo) > z) lo *= 2.0;
  double hi = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, -lo); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (beta(mid) <= z) lo = mid; else hi = mid;
  }
  return lo;
}

double NonlinearityPair::Impl::B_quadrature(double z) const {
  if (z == 0.0) return 0.0;
  if (z > beta.range_sup() || z < beta.range_inf()) return kInf;
  std::vector<double> breaks;
  for (double k : beta.kinks()) breaks.push_back(beta(k));
  breaks.push_back(beta(beta.core_lo()));
  breaks.push_back(beta(beta.core_hi()));
  for (double k : zeta.kinks()) breaks.push_back(beta(k));
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  auto integrand = [this](double y) {
    const auto t = right_inverse_bisect(y);
    return t ? zeta(*t) : 0.0;
  };
  return integrate(integrand, 0.0, z, breaks, quadrature_tol);
}

NonlinearityPair::NonlinearityPair(ScalarNonlinearity beta, ScalarNonlinearity zeta,
                                   std::optional<Coercivity> zeta_coercivity,
                                   std::optional<Coercivity> beta_coercivity,
                                   std::optional<ExponentCase> exponent_case,
                                   std::string name) {
  auto impl = std::make_shared<Impl>(std::move(beta), std::move(zeta));
  impl->zeta_coercivity = zeta_coercivity;
  impl->beta_coercivity = beta_coercivity;
  impl->exponent_case = exponent_case;
  impl->name = std::move(name);

  auto check_coercivity = [](const ScalarNonlinearity& f, const Coercivity& c,
                             const char* which) {
    if (!(c.slope > 0.0) || c.offset < 0.0) {
      throw InvariantViolation(std::string(which) +
                               " coercivity needs slope > 0 and offset >= 0");
    }
    if (c.slope > std::min(f.left_slope(), f.right_slope()) * (1.0 + 1e-12)) {
      throw InvariantViolation(std::string(which) +
                               " grows slower than its declared coercivity slope");
    }
    const double need = required_offset(f, c.slope);
    if (need > c.offset * (1.0 + 1e-12) + 1e-12) {
      std::ostringstream os;
      os << which << " violates |F(s)| >= " << c.slope << "|s| - " << c.offset
         << " (offset " << need << " required)";
      throw InvariantViolation(os.str());
    }
  };
  if (impl->zeta_coercivity) check_coercivity(impl->zeta, *impl->zeta_coercivity, "zeta");
  if (impl->beta_coercivity) check_coercivity(impl->beta, *impl->beta_coercivity, "beta");

  impl->knots = merged_knots(impl->beta, impl->zeta);
  impl->zero_index = static_cast<std::size_t>(
      std::lower_bound(impl->knots.begin(), impl->knots.end(), 0.0) -
      impl->knots.begin());
  impl->piecewise_linear =
      impl->beta.is_piecewise_linear() && impl->zeta.is_piecewise_linear();
  if (impl->piecewise_linear) {
    impl->build_piecewise_tables();
  } else {
    impl->build_quadrature_tables();
  }
  impl_ = std::move(impl);

  if (impl_->exponent_case) {
    const ExponentCase c = *impl_->exponent_case;
    if (c != ExponentCase::kI) {
      if (!impl_->beta_coercivity) {
        throw InvariantViolation(
            std::string("exponent case ") + to_string(c) +
            " requires |beta(s)| >= M3 |s| - M4");
      }
      if (c == ExponentCase::kIII && !impl_->beta.strictly_increasing()) {
        throw InvariantViolation("exponent case III requires beta strictly increasing");
      }
    }
  }
}

NonlinearityPair NonlinearityPair::with_fitted_coercivity(ScalarNonlinearity beta,
                                                          ScalarNonlinearity zeta,
                                                          std::string name) {
  const Coercivity cz = fit_coercivity(zeta);
  if (!(cz.slope > 0.0)) {
    throw InvariantViolation("zeta has a zero tail slope; no coercivity constants exist");
  }
  std::optional<Coercivity> cb;
  const Coercivity fitted_beta = fit_coercivity(beta);
  if (fitted_beta.slope > 0.0) cb = fitted_beta;
  return NonlinearityPair(std::move(beta), std::move(zeta), cz, cb, std::nullopt,
                          std::move(name));
}

const ScalarNonlinearity& NonlinearityPair::beta() const noexcept { return impl_->beta; }
const ScalarNonlinearity& NonlinearityPair::zeta() const noexcept { return impl_->zeta; }
const std::optional<Coercivity>& NonlinearityPair::zeta_coercivity() const noexcept {
  return impl_->zeta_coercivity;
}
const std::optional<Coercivity>& NonlinearityPair::beta_coercivity() const noexcept {
  return impl_->beta_coercivity;
}
const std::optional<ExponentCase>& NonlinearityPair::exponent_case() const noexcept {
  return impl_->exponent_case;
}
const std::string& NonlinearityPair::name() const noexcept { return impl_->name; }
bool NonlinearityPair::piecewise_linear() const noexcept { return impl_->piecewise_linear; }
const std::vector<double>& NonlinearityPair::knots() const noexcept { return impl_->knots; }

double NonlinearityPair::nu(double s) const {
  if (!std::isfinite(s)) throw InvalidArgument("nu needs a finite argument");
  if (impl_->piecewise_linear) {
    const auto p = impl_->piece(s);
    return p.nu0 + p.cz * p.cb * (s - p.anchor);
  }
  return impl_->nu_table(s);
}

double NonlinearityPair::nu_derivative(double s) const {
  return impl_->zeta.derivative(s) * impl_->beta.derivative(s);
}

std::optional<double> NonlinearityPair::beta_right_inverse(double z) const {
  if (impl_->piecewise_linear) return impl_->right_inverse_exact(z);
  return impl_->right_inverse_bisect(z);
}

double NonlinearityPair::B(double z) const {
  if (std::isnan(z)) throw InvalidArgument("B of NaN");
  if (impl_->piecewise_linear) return impl_->B_exact(z);
  return impl_->B_quadrature(z);
}

double NonlinearityPair::B_of_beta(double s) const {
  if (!std::isfinite(s)) throw InvalidArgument("B(beta(s)) needs a finite argument");
  if (impl_->piecewise_linear) {
    const auto p = impl_->piece(s);
    const double d = s - p.anchor;
    return p.bb0 + p.cb * (p.zeta0 * d + 0.5 * p.cz * d * d);
  }
  return impl_->bb_table(s);
}

double NonlinearityPair::convexity_gap(double a, double b) const {
  const double ba = impl_->beta(a);
  const double bb = impl_->beta(b);
  const double mid = B(0.5 * (ba + bb));
  const double dnu = nu(a) - nu(b);
  return 4.0 * lipschitz_beta() * lipschitz_zeta() *
             (B_of_beta(a) + B_of_beta(b) - 2.0 * mid) -
         dnu * dnu;
}

NonlinearityPair NonlinearityPair::regularized(double delta) const {
  if (delta < 0.0) throw InvalidArgument("regularization must be nonnegative");
  if (delta == 0.0) return *this;
  std::optional<Coercivity> cz = impl_->zeta_coercivity;
  if (cz) cz->slope += delta;
  std::optional<Coercivity> cb = impl_->beta_coercivity;
  if (cb) {
    cb->slope += delta;
  } else {
    cb = Coercivity{delta, 0.0};
  }
  return NonlinearityPair(impl_->beta.plus_identity(delta),
                          impl_->zeta.plus_identity(delta), cz, cb,
                          impl_->exponent_case, impl_->name);
}

bool NonlinearityPair::nu_degenerate_on(double lo, double hi) const {
  if (hi < lo) std::swap(lo, hi);
  const auto& k = impl_->knots;
  if (impl_->piecewise_linear) {
    auto flat = [](double cb, double cz) { return cb * cz == 0.0; };
    // Tails.
    if (lo < k.front() && flat(impl_->cb_left, impl_->cz_left)) return true;
    if (hi > k.back() && flat(impl_->cb_right, impl_->cz_right)) return true;
    for (std::size_t i = 0; i + 1 < k.size(); ++i) {
      const double a = std::max(lo, k[i]);
      const double b = std::min(hi, k[i + 1]);
      if (b > a && flat(impl_->cb[i], impl_->cz[i])) return true;
    }
    return false;
  }
  constexpr int kSamples = 2001;
  int run = 0;
  for (int i = 0; i < kSamples; ++i) {
    const double s = lo + (hi - lo) * i / (kSamples - 1);
    run = nu_derivative(s) <= 1e-14 ? run + 1 : 0;
    if (run >= 2) return true;
  }
  return false;
}

std::optional<ExponentCase> classify_exponent(const NonlinearityPair& pair, double p) {
  if (!(p > 1.0)) throw InvalidArgument("exponent p must exceed 1");
  constexpr double kCritical = 2.0 / 3.0;  // 2d/(d+2) with d = 1
  if (p >= 2.0) return ExponentCase::kI;
  const bool beta_coercive = pair.beta_coercivity().has_value() ||
                             fit_coercivity(pair.beta()).slope > 0.0;
  if (!beta_coercive) return std::nullopt;
  if (p > kCritical) return ExponentCase::kII;
  if (!pair.beta().strictly_increasing()) return std::nullopt;
  return ExponentCase::kIII;
}

}  // namespace dnstab::monotone
