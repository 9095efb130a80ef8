#include "dnstab/fem/flux_law.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "dnstab/errors.hpp"

namespace dnstab::fem {

struct FluxLaw::Impl {
  FluxKind kind = FluxKind::kLinearHetero;
  std::string name;
  double p = 2.0;
  double a_lower = 1.0;
  double mu = 1.0;
  double a_bar = 0.0;
  double theta = 0.0;
  double eps = 0.0;
  double scale = 1.0;
  bool strict = true;
  std::function<double(double)> lambda;
  double lambda_lower = 0.0;
  double lambda_upper = 0.0;
  CustomFlux custom;
};

const char* to_string(FluxKind kind) noexcept {
  switch (kind) {
    case FluxKind::kLinearHetero: return "linear-hetero";
    case FluxKind::kMobility: return "mobility";
    case FluxKind::kPLaplace: return "p-laplace";
    case FluxKind::kCustom: return "custom";
  }
  return "?";
}

namespace {

double mobility_k(double s) { return 1.0 + 0.5 * s * s / (1.0 + s * s); }
double mobility_k_prime(double s) {
  const double d = 1.0 + s * s;
  return s / (d * d);
}

}  // namespace

FluxLaw::FluxLaw(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

FluxLaw FluxLaw::linear_hetero(std::function<double(double)> lambda, double lambda_lower,
                               double lambda_upper, std::string name) {
  if (!lambda) throw InvalidArgument("linear flux needs a coefficient");
  if (!(lambda_lower > 0.0) || lambda_upper < lambda_lower) {
    throw InvalidArgument("linear flux needs 0 < lambda_lower <= lambda_upper");
  }
  constexpr int kSamples = 1001;
  for (int i = 0; i < kSamples; ++i) {
    const double x = static_cast<double>(i) / (kSamples - 1);
    const double v = lambda(x);
    if (v < lambda_lower * (1.0 - 1e-12) || v > lambda_upper * (1.0 + 1e-12)) {
      throw InvariantViolation("lambda(" + std::to_string(x) + ") = " + std::to_string(v) +
                               " leaves its declared bounds");
    }
  }
  auto impl = std::make_shared<Impl>();
  impl->kind = FluxKind::kLinearHetero;
  impl->name = std::move(name);
  impl->p = 2.0;
  impl->a_lower = lambda_lower;
  impl->mu = lambda_upper;
  impl->lambda = std::move(lambda);
  impl->lambda_lower = lambda_lower;
  impl->lambda_upper = lambda_upper;
  return FluxLaw(std::move(impl));
}

FluxLaw FluxLaw::linear(double lambda) {
  return linear_hetero([lambda](double) { return lambda; }, lambda, lambda, "linear");
}

FluxLaw FluxLaw::mobility() {
  auto impl = std::make_shared<Impl>();
  impl->kind = FluxKind::kMobility;
  impl->name = "mobility";
  impl->p = 2.0;
  impl->a_lower = 1.0;
  impl->mu = 1.5;
  return FluxLaw(std::move(impl));
}

FluxLaw FluxLaw::p_laplace(double p, double eps_grad) {
  if (!(p > 1.0)) throw InvalidArgument("exponent p must exceed 1");
  if (eps_grad < 0.0) throw InvalidArgument("gradient regularizer must be nonnegative");
  if (p < 2.0 && !(eps_grad > 0.0)) {
    throw InvalidArgument("p-Laplacian with p < 2 needs a positive gradient regularizer");
  }
  auto impl = std::make_shared<Impl>();
  impl->kind = FluxKind::kPLaplace;
  impl->name = "p-laplace";
  impl->p = p;
  impl->eps = eps_grad;
  if (p < 2.0) {
    impl->a_lower = std::pow(2.0, -(2.0 - p) / 2.0);
    impl->theta = impl->a_lower * std::pow(eps_grad, p);
    impl->mu = 1.0;
    impl->a_bar = 0.0;
  } else {
    impl->a_lower = 1.0;
    impl->mu = std::pow(2.0, (p - 2.0) / 2.0);
    impl->a_bar = impl->mu * std::pow(eps_grad, p - 1.0);
  }
  return FluxLaw(std::move(impl));
}

FluxLaw FluxLaw::custom(CustomFlux definition) {
  if (!definition.value || !definition.d_xi || !definition.d_s) {
    throw InvalidArgument("custom flux needs value, d_xi and d_s");
  }
  if (!(definition.p > 1.0)) throw InvalidArgument("exponent p must exceed 1");
  auto impl = std::make_shared<Impl>();
  impl->kind = FluxKind::kCustom;
  impl->name = definition.name;
  impl->p = definition.p;
  impl->a_lower = definition.a_lower;
  impl->mu = definition.mu;
  impl->a_bar = definition.a_bar;
  impl->strict = definition.strict_monotone;
  impl->custom = std::move(definition);
  return FluxLaw(std::move(impl));
}

FluxLaw FluxLaw::scaled(double factor) const {
  if (!(factor > 0.0)) throw InvalidArgument("flux scale factor must be positive");
  auto impl = std::make_shared<Impl>(*impl_);
  impl->scale *= factor;
  impl->a_lower *= factor;
  impl->mu *= factor;
  impl->a_bar *= factor;
  impl->theta *= factor;
  impl->lambda_lower *= factor;
  impl->lambda_upper *= factor;
  return FluxLaw(std::move(impl));
}

double FluxLaw::operator()(double x, double s, double xi) const {
  const Impl& f = *impl_;
  switch (f.kind) {
    case FluxKind::kLinearHetero: return f.scale * f.lambda(x) * xi;
    case FluxKind::kMobility: return f.scale * mobility_k(s) * xi;
    case FluxKind::kPLaplace: {
      if (f.p == 2.0) return f.scale * xi;
      const double r2 = xi * xi + f.eps * f.eps;
      if (r2 == 0.0) return 0.0;
      return f.scale * std::pow(r2, 0.5 * (f.p - 2.0)) * xi;
    }
    case FluxKind::kCustom: return f.scale * f.custom.value(x, s, xi);
  }
  return 0.0;
}

double FluxLaw::d_xi(double x, double s, double xi) const {
  const Impl& f = *impl_;
  switch (f.kind) {
    case FluxKind::kLinearHetero: return f.scale * f.lambda(x);
    case FluxKind::kMobility: return f.scale * mobility_k(s);
    case FluxKind::kPLaplace: {
      if (f.p == 2.0) return f.scale;
      const double r2 = xi * xi + f.eps * f.eps;
      if (r2 == 0.0) return f.p > 2.0 ? 0.0 : std::numeric_limits<double>::infinity();
      return f.scale * std::pow(r2, 0.5 * (f.p - 4.0)) * ((f.p - 1.0) * xi * xi + f.eps * f.eps);
    }
    case FluxKind::kCustom: return f.scale * f.custom.d_xi(x, s, xi);
  }
  return 0.0;
}

double FluxLaw::d_s(double x, double s, double xi) const {
  const Impl& f = *impl_;
  switch (f.kind) {
    case FluxKind::kMobility: return f.scale * mobility_k_prime(s) * xi;
    case FluxKind::kCustom: return f.scale * f.custom.d_s(x, s, xi);
    default: return 0.0;
  }
}

FluxKind FluxLaw::kind() const noexcept { return impl_->kind; }
const std::string& FluxLaw::name() const noexcept { return impl_->name; }
double FluxLaw::p() const noexcept { return impl_->p; }
double FluxLaw::a_lower() const noexcept { return impl_->a_lower; }
double FluxLaw::mu() const noexcept { return impl_->mu; }
double FluxLaw::a_bar() const noexcept { return impl_->a_bar; }
double FluxLaw::theta() const noexcept { return impl_->theta; }
double FluxLaw::eps_grad() const noexcept { return impl_->eps; }
double FluxLaw::scale() const noexcept { return impl_->scale; }
bool FluxLaw::strict_monotone() const noexcept { return impl_->strict; }
bool FluxLaw::is_linear() const noexcept { return impl_->kind == FluxKind::kLinearHetero; }

double FluxLaw::lambda(double x) const {
  if (!is_linear()) throw InvalidArgument("flux '" + name() + "' is not linear");
  return impl_->scale * impl_->lambda(x);
}

double FluxLaw::lambda_lower() const {
  if (!is_linear()) throw InvalidArgument("flux '" + name() + "' is not linear");
  return impl_->lambda_lower;
}

double FluxLaw::lambda_upper() const {
  if (!is_linear()) throw InvalidArgument("flux '" + name() + "' is not linear");
  return impl_->lambda_upper;
}

std::vector<FluxSample> random_flux_samples(std::uint64_t seed, std::size_t count,
                                            double range) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> wide(-range, range);
  std::vector<FluxSample> out(count);
  for (auto& s : out) {
    s.x = unit(rng);
    s.s = wide(rng);
    s.xi = wide(rng);
    s.chi = wide(rng);
  }
  return out;
}

namespace {

template <class F>
ProbeResult minimize(const std::vector<FluxSample>& samples, F&& value) {
  if (samples.empty()) throw InvalidArgument("flux probe needs at least one sample");
  ProbeResult r;
  r.min_value = std::numeric_limits<double>::infinity();
  for (const auto& s : samples) {
    const double v = value(s);
    if (v < r.min_value) {
      r.min_value = v;
      r.witness = s;
    }
  }
  return r;
}

}  // namespace

ProbeResult flux_monotonicity_probe(const FluxLaw& flux, const std::vector<FluxSample>& samples) {
  ProbeResult r = minimize(samples, [&](const FluxSample& q) {
    return (flux(q.x, q.s, q.xi) - flux(q.x, q.s, q.chi)) * (q.xi - q.chi);
  });
  r.passed = r.min_value >= 0.0;
  if (flux.strict_monotone()) {
    for (const auto& q : samples) {
      if (q.xi != q.chi &&
          !((flux(q.x, q.s, q.xi) - flux(q.x, q.s, q.chi)) * (q.xi - q.chi) > 0.0)) {
        r.passed = false;
        r.witness = q;
        break;
      }
    }
  }
  return r;
}

ProbeResult flux_coercivity_probe(const FluxLaw& flux, const std::vector<FluxSample>& samples) {
  ProbeResult r = minimize(samples, [&](const FluxSample& q) {
    return flux(q.x, q.s, q.xi) * q.xi -
           (flux.a_lower() * std::pow(std::abs(q.xi), flux.p()) - flux.theta());
  });
  r.passed = r.min_value >= -1e-12 * (1.0 + std::abs(r.witness.xi));
  return r;
}

ProbeResult flux_growth_probe(const FluxLaw& flux, const std::vector<FluxSample>& samples) {
  ProbeResult r = minimize(samples, [&](const FluxSample& q) {
    return flux.a_bar() + flux.mu() * std::pow(std::abs(q.xi), flux.p() - 1.0) -
           std::abs(flux(q.x, q.s, q.xi));
  });
  r.passed = r.min_value >= -1e-12 * (1.0 + std::abs(r.witness.xi));
  return r;
}

}  // namespace dnstab::fem
