#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace dnstab::fem {

enum class FluxKind { kLinearHetero, kMobility, kPLaplace, kCustom };

const char* to_string(FluxKind kind) noexcept;

/// User-supplied flux for tests and experiments. Constants are taken as
/// declared; the probes below report whether they actually hold.
struct CustomFlux {
  std::function<double(double, double, double)> value;
  std::function<double(double, double, double)> d_xi;
  std::function<double(double, double, double)> d_s;
  double p = 2.0;
  double a_lower = 1.0;
  double mu = 1.0;
  double a_bar = 0.0;
  bool strict_monotone = false;
  std::string name = "custom";
};

/// A Leray-Lions flux a(x, s, xi) in one space dimension with
///   a(x,s,xi) xi        >= a_lower |xi|^p - theta,
///   |a(x,s,xi)|         <= a_bar + mu |xi|^(p-1),
///   (a(xi)-a(chi))(xi-chi) >= 0.
/// theta is zero except for the regularized p-Laplacian with p < 2.
class FluxLaw {
 public:
  /// a = lambda(x) xi with lambda in [lambda_lower, lambda_upper].
  static FluxLaw linear_hetero(std::function<double(double)> lambda, double lambda_lower,
                               double lambda_upper, std::string name = "linear-hetero");
  /// a = lambda xi.
  static FluxLaw linear(double lambda = 1.0);
  /// a = K(s) xi with K(s) = 1 + s^2 / (2 (1 + s^2)) in [1, 3/2].
  static FluxLaw mobility();
  /// a = (xi^2 + eps^2)^((p-2)/2) xi; eps > 0 is required for p < 2.
  static FluxLaw p_laplace(double p, double eps_grad = 1e-6);
  static FluxLaw custom(CustomFlux definition);

  /// factor * a, with every constant rescaled.
  FluxLaw scaled(double factor) const;

  double operator()(double x, double s, double xi) const;
  double d_xi(double x, double s, double xi) const;
  double d_s(double x, double s, double xi) const;

  FluxKind kind() const noexcept;
  const std::string& name() const noexcept;
  double p() const noexcept;
  double p_conjugate() const noexcept { return p() / (p() - 1.0); }
  double a_lower() const noexcept;
  double mu() const noexcept;
  double a_bar() const noexcept;
  double theta() const noexcept;
  double eps_grad() const noexcept;
  double scale() const noexcept;
  bool strict_monotone() const noexcept;
  /// True for a = lambda(x) xi (the linear case of the uniqueness argument).
  bool is_linear() const noexcept;
  /// Coefficient lambda(x) of a linear flux; throws otherwise.
  double lambda(double x) const;
  double lambda_lower() const;
  double lambda_upper() const;

 private:
  struct Impl;
  explicit FluxLaw(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

struct FluxSample {
  double x = 0.0;
  double s = 0.0;
  double xi = 0.0;
  double chi = 0.0;
};

/// Seeded samples with x in [0, 1] and s, xi, chi in [-range, range].
std::vector<FluxSample> random_flux_samples(std::uint64_t seed, std::size_t count,
                                            double range = 10.0);

struct ProbeResult {
  double min_value = 0.0;
  FluxSample witness;
  bool passed = true;
};

/// Minimum of (a(x,s,xi) - a(x,s,chi)) (xi - chi). Passes when >= 0, or > 0
/// on distinct pairs when the law is declared strictly monotone.
ProbeResult flux_monotonicity_probe(const FluxLaw& flux, const std::vector<FluxSample>& samples);
/// Minimum of a(x,s,xi) xi - (a_lower |xi|^p - theta).
ProbeResult flux_coercivity_probe(const FluxLaw& flux, const std::vector<FluxSample>& samples);
/// Minimum of a_bar + mu |xi|^(p-1) - |a(x,s,xi)|.
ProbeResult flux_growth_probe(const FluxLaw& flux, const std::vector<FluxSample>& samples);

}  // namespace dnstab::fem
