#include "dnstab/stability/family.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dnstab/errors.hpp"
#include "dnstab/monotone/hypotheses.hpp"

namespace dnstab::stability {

using monotone::Coercivity;
using monotone::NonlinearityPair;
using monotone::ScalarNonlinearity;

const char* to_string(FamilyKind kind) noexcept {
  switch (kind) {
    case FamilyKind::kDelta: return "delta";
    case FamilyKind::kMollified: return "mollified";
    case FamilyKind::kFluxScale: return "flux-scale";
    case FamilyKind::kSourceShift: return "source-shift";
    case FamilyKind::kInitialShift: return "initial-shift";
    case FamilyKind::kBetaSlopeGrowth: return "beta-slope-growth";
  }
  return "?";
}

FamilyKind family_kind_from_string(std::string_view name) {
  for (FamilyKind k : {FamilyKind::kDelta, FamilyKind::kMollified, FamilyKind::kFluxScale,
                       FamilyKind::kSourceShift, FamilyKind::kInitialShift,
                       FamilyKind::kBetaSlopeGrowth}) {
    if (name == to_string(k)) return k;
  }
  throw InvalidArgument("unknown perturbation family '" + std::string(name) + "'");
}

namespace {

double sup_distance(const ScalarNonlinearity& a, const ScalarNonlinearity& b, double window) {
  constexpr int kSamples = 4001;
  double worst = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    const double s = -window + 2.0 * window * i / (kSamples - 1);
    worst = std::max(worst, std::abs(a(s) - b(s)));
  }
  for (double k : a.kinks()) {
    if (std::abs(k) <= window) worst = std::max(worst, std::abs(a(k) - b(k)));
  }
  for (double k : b.kinks()) {
    if (std::abs(k) <= window) worst = std::max(worst, std::abs(a(k) - b(k)));
  }
  return worst;
}

NonlinearityPair perturbed_pair(const NonlinearityPair& base, FamilyKind kind, int n) {
  const double inv = 1.0 / static_cast<double>(n);
  switch (kind) {
    case FamilyKind::kDelta: return base.regularized(inv);
    case FamilyKind::kMollified: {
      auto smooth = [inv](const ScalarNonlinearity& f) {
        const auto b = f.breakpoints();
        // A single breakpoint with no slope jump needs no smoothing.
        if (b.size() == 1 && f.left_slope() == f.right_slope()) return f;
        return monotone::mollify(f, inv);
      };
      auto beta = smooth(base.beta());
      auto zeta = smooth(base.zeta());
      std::optional<Coercivity> cz = monotone::fit_coercivity(zeta);
      std::optional<Coercivity> cb;
      if (base.beta_coercivity()) cb = monotone::fit_coercivity(beta);
      return NonlinearityPair(std::move(beta), std::move(zeta), cz, cb, std::nullopt,
                              base.name());
    }
    case FamilyKind::kBetaSlopeGrowth: {
      std::optional<Coercivity> cb = base.beta_coercivity();
      if (cb) {
        cb->slope *= n;
        cb->offset *= n;
      }
      return NonlinearityPair(base.beta().scaled(n), base.zeta(), base.zeta_coercivity(), cb,
                              std::nullopt, base.name());
    }
    default: return base;
  }
}

}  // namespace

PerturbationFamily make_family(const solver::ProblemSpec& base, FamilyKind kind,
                               const std::vector<int>& indices, const FamilyOptions& options) {
  if (indices.empty()) throw InvalidArgument("perturbation family needs at least one index");
  for (int n : indices) {
    if (n < 1) throw InvalidArgument("family indices must be positive");
  }
  {
    std::vector<double> grid;
    for (int i = -20; i <= 20; ++i) grid.push_back(0.25 * i);
    const auto report = monotone::verify_pair_hypotheses(base.pair, grid);
    if (!report.all_passed()) {
      std::string failed;
      for (const auto& c : report.checks) {
        if (!c.passed) failed += (failed.empty() ? "" : ", ") + c.name;
      }
      throw InvalidArgument("base pair fails its hypotheses: " + failed);
    }
  }

  PerturbationFamily family{base, kind, {}, options.window};
  const solver::SpaceTimeFunction g =
      options.source_direction ? options.source_direction
                               : [](double x, double) { return std::sin(std::numbers::pi * x); };
  const solver::SpaceFunction w =
      options.initial_direction ? options.initial_direction
                                : [](double x) { return std::sin(std::numbers::pi * x); };

  for (int n : indices) {
    const double inv = 1.0 / static_cast<double>(n);
    NonlinearityPair pair = perturbed_pair(base.pair, kind, n);
    fem::FluxLaw flux = kind == FamilyKind::kFluxScale ? base.flux.scaled(1.0 + inv) : base.flux;
    solver::SpaceTimeFunction source = base.source;
    bool zero_source = base.zero_source();
    if (kind == FamilyKind::kSourceShift) {
      source = [f = base.source, g, inv](double x, double t) { return f(x, t) + inv * g(x, t); };
      zero_source = false;
    }
    solver::SpaceFunction initial = base.initial;
    if (kind == FamilyKind::kInitialShift) {
      initial = [u0 = base.initial, w, inv](double x) { return u0(x) + inv * w(x); };
    }
    FamilyMember member{n,
                        solver::ProblemSpec(std::move(pair), std::move(flux), std::move(source),
                                            std::move(initial), base.horizon,
                                            base.name + "/" + to_string(kind) + "-" +
                                                std::to_string(n),
                                            zero_source),
                        0.0, 0.0};
    member.beta_distance =
        sup_distance(member.spec.pair.beta(), base.pair.beta(), options.window);
    member.zeta_distance =
        sup_distance(member.spec.pair.zeta(), base.pair.zeta(), options.window);
    family.members.push_back(std::move(member));
  }
  return family;
}

std::string UniformityReport::message() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& e : envelopes) {
    if (e.passed) continue;
    os << (first ? "" : "; ") << e.name << " leaves [" << e.lo << ", " << e.hi << "] at n = "
       << e.violating_index.value_or(0) << " (value " << e.worst << ")";
    first = false;
  }
  return first ? "all constants uniform in n" : os.str();
}

UniformityReport check_hypothesis_uniformity(const PerturbationFamily& family) {
  auto constants_of = [](int n, const solver::ProblemSpec& spec) {
    MemberConstants c;
    c.n = n;
    c.L_beta = spec.pair.lipschitz_beta();
    c.L_zeta = spec.pair.lipschitz_zeta();
    const Coercivity z = spec.pair.zeta_coercivity().value_or(
        monotone::fit_coercivity(spec.pair.zeta()));
    c.M1 = z.slope;
    c.M2 = z.offset;
    if (spec.pair.beta_coercivity()) {
      c.M3 = spec.pair.beta_coercivity()->slope;
      c.M4 = spec.pair.beta_coercivity()->offset;
    }
    c.a_lower = spec.flux.a_lower();
    c.mu = spec.flux.mu();
    return c;
  };

  UniformityReport report;
  const MemberConstants base = constants_of(0, family.base);
  for (const auto& m : family.members) report.members.push_back(constants_of(m.n, m.spec));

  enum class Side { kTwoSided, kLower, kOffset };
  auto envelope = [&](const std::string& name, double base_value, Side side, auto&& get) {
    ConstantEnvelope e;
    e.name = name;
    e.base = base_value;
    switch (side) {
      case Side::kTwoSided:
        e.lo = 0.5 * base_value;
        e.hi = 2.0 * base_value;
        break;
      case Side::kLower:
        e.lo = 0.5 * base_value;
        e.hi = std::numeric_limits<double>::infinity();
        break;
      case Side::kOffset:
        e.lo = 0.0;
        e.hi = 2.0 * base_value + 1.0;
        break;
    }
    e.worst = base_value;
    for (const auto& m : report.members) {
      const std::optional<double> v = get(m);
      if (!v) {
        e.passed = false;
        e.violating_index = m.n;
        continue;
      }
      const bool inside = *v >= e.lo && *v <= e.hi;
      if (std::abs(*v - base_value) >= std::abs(e.worst - base_value)) e.worst = *v;
      if (!inside && e.passed) {
        e.passed = false;
        e.violating_index = m.n;
        e.worst = *v;
      }
    }
    report.passed = report.passed && e.passed;
    report.envelopes.push_back(e);
  };
  using O = std::optional<double>;
  envelope("L_beta", base.L_beta, Side::kTwoSided, [](const MemberConstants& m) { return O(m.L_beta); });
  envelope("L_zeta", base.L_zeta, Side::kTwoSided, [](const MemberConstants& m) { return O(m.L_zeta); });
  envelope("M1", base.M1, Side::kLower, [](const MemberConstants& m) { return O(m.M1); });
  envelope("M2", base.M2, Side::kOffset, [](const MemberConstants& m) { return O(m.M2); });
  if (base.M3) {
    envelope("M3", *base.M3, Side::kLower, [](const MemberConstants& m) { return m.M3; });
    envelope("M4", *base.M4, Side::kOffset, [](const MemberConstants& m) { return m.M4; });
  }
  envelope("a_lower", base.a_lower, Side::kLower, [](const MemberConstants& m) { return O(m.a_lower); });
  envelope("mu", base.mu, Side::kTwoSided, [](const MemberConstants& m) { return O(m.mu); });
  return report;
}

}  // namespace dnstab::stability
