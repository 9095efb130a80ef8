#include "dnstab/monotone/hypotheses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dnstab/errors.hpp"

namespace dnstab::monotone {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// One affine piece of a piecewise-linear pair: [lo, hi] (possibly infinite)
// with anchor knot k, slopes cb, cz.
struct Piece {
  double lo;
  double hi;
  double anchor;
  double beta0;
  double zeta0;
  double bb0;
  double cb;
  double cz;
};

std::vector<Piece> pieces_of(const NonlinearityPair& pair) {
  const auto& k = pair.knots();
  const auto& beta = pair.beta();
  const auto& zeta = pair.zeta();
  std::vector<Piece> out;
  auto make = [&](double lo, double hi, double anchor, double cb, double cz) {
    out.push_back({lo, hi, anchor, beta(anchor), zeta(anchor), pair.B_of_beta(anchor), cb, cz});
  };
  make(-kInf, k.front(), k.front(), beta.left_slope(), zeta.left_slope());
  for (std::size_t i = 0; i + 1 < k.size(); ++i) {
    const double mid = 0.5 * (k[i] + k[i + 1]);
    make(k[i], k[i + 1], k[i], beta.derivative(mid), zeta.derivative(mid));
  }
  make(k.back(), kInf, k.back(), beta.right_slope(), zeta.right_slope());
  return out;
}

double sup_ratio_exact(const NonlinearityPair& pair) {
  double best = 0.0;
  for (const Piece& p : pieces_of(pair)) {
    const double c = 0.5 * p.cb * p.cz;
    // B(beta(s)) = alpha + gamma s + c s^2 on the piece.
    const double alpha = p.bb0 - p.cb * p.zeta0 * p.anchor + c * p.anchor * p.anchor;
    const double gamma = p.cb * p.zeta0 - 2.0 * c * p.anchor;
    auto ratio = [&](double s) { return pair.B_of_beta(s) / (s * s); };
    if (std::isinf(p.lo) || std::isinf(p.hi)) best = std::max(best, c);
    if (p.lo <= 0.0 && 0.0 <= p.hi) best = std::max(best, c);
    for (double s : {p.lo, p.hi}) {
      if (std::isfinite(s) && s != 0.0) best = std::max(best, ratio(s));
    }
    if (gamma != 0.0) {
      const double star = -2.0 * alpha / gamma;
      if (star > p.lo && star < p.hi && std::abs(star) > 1e-12) best = std::max(best, ratio(star));
    }
  }
  return best;
}

// sup over R of K1 beta^2 - B(beta), piece by piece; +inf when unbounded.
double sup_lower_defect_exact(const NonlinearityPair& pair, double k1) {
  double best = 0.0;
  for (const Piece& p : pieces_of(pair)) {
    const double q0 = k1 * p.beta0 * p.beta0 - p.bb0;
    const double q1 = p.cb * (2.0 * k1 * p.beta0 - p.zeta0);
    const double q2 = k1 * p.cb * p.cb - 0.5 * p.cb * p.cz;
    auto q = [&](double d) { return q0 + q1 * d + q2 * d * d; };
    const double dlo = p.lo - p.anchor;
    const double dhi = p.hi - p.anchor;
    if (std::isinf(dlo) && (q2 > 0.0 || (q2 == 0.0 && q1 < 0.0))) return kInf;
    if (std::isinf(dhi) && (q2 > 0.0 || (q2 == 0.0 && q1 > 0.0))) return kInf;
    if (std::isfinite(dlo)) best = std::max(best, q(dlo));
    if (std::isfinite(dhi)) best = std::max(best, q(dhi));
    if (q2 < 0.0) {
      const double star = -q1 / (2.0 * q2);
      if (star > dlo && star < dhi) best = std::max(best, q(star));
    }
  }
  return best;
}

std::vector<double> dense_samples(const NonlinearityPair& pair) {
  const double lo = std::min(pair.beta().core_lo(), pair.zeta().core_lo());
  const double hi = std::max(pair.beta().core_hi(), pair.zeta().core_hi());
  const double span = std::max(1.0, hi - lo);
  const double a = lo - 4.0 * span;
  const double b = hi + 4.0 * span;
  constexpr int kSamples = 4001;
  std::vector<double> s;
  s.reserve(kSamples + pair.knots().size());
  for (int i = 0; i < kSamples; ++i) s.push_back(a + (b - a) * i / (kSamples - 1));
  s.insert(s.end(), pair.knots().begin(), pair.knots().end());
  return s;
}

double tail_ratio(double cb, double cz) { return cb > 0.0 ? cz / (2.0 * cb) : kInf; }

}  // namespace

GrowthConstants fit_growth_constants(const NonlinearityPair& pair) {
  const auto& beta = pair.beta();
  const auto& zeta = pair.zeta();
  GrowthConstants k;
  k.K1 = std::min(tail_ratio(beta.left_slope(), zeta.left_slope()),
                  tail_ratio(beta.right_slope(), zeta.right_slope()));
  if (!std::isfinite(k.K1)) k.K1 = 0.5 / beta.lipschitz();
  if (!(k.K1 > 0.0)) {
    throw InvariantViolation("zeta is bounded in a tail where beta grows; no K1 exists");
  }

  if (pair.piecewise_linear()) {
    k.K3 = sup_ratio_exact(pair);
    double defect = sup_lower_defect_exact(pair, k.K1);
    if (!std::isfinite(defect)) {
      k.K1 *= 0.5;
      defect = sup_lower_defect_exact(pair, k.K1);
    }
    k.K2 = std::max(0.0, defect);
    return k;
  }

  // Tail asymptotics plus a dense scan; K1 halved so the quadratic terms
  // dominate in both tails.
  k.K1 *= 0.5;
  k.K3 = std::max(0.5 * beta.left_slope() * zeta.left_slope(),
                  0.5 * beta.right_slope() * zeta.right_slope());
  for (double s : dense_samples(pair)) {
    const double bb = pair.B_of_beta(s);
    if (std::abs(s) > 1e-8) k.K3 = std::max(k.K3, bb / (s * s));
    const double b = beta(s);
    k.K2 = std::max(k.K2, k.K1 * b * b - bb);
  }
  k.K3 *= 1.0 + 1e-8;
  k.K2 = k.K2 * (1.0 + 1e-8) + pair.beta().quadrature_tol();
  return k;
}

double InequalitySlacks::min() const {
  return std::min({nu_zeta_lipschitz, nu_product, growth_lower, growth_upper,
                   uniform_convexity});
}

InequalitySlacks inequality_slacks(const NonlinearityPair& pair, const GrowthConstants& k,
                                   double a, double b) {
  const auto& beta = pair.beta();
  const auto& zeta = pair.zeta();
  const double lb = pair.lipschitz_beta();
  const double lz = pair.lipschitz_zeta();
  const double dnu = pair.nu(a) - pair.nu(b);
  const double dz = zeta(a) - zeta(b);
  const double db = beta(a) - beta(b);
  const double bb = pair.B_of_beta(a);
  const double ba = beta(a);

  InequalitySlacks s;
  s.nu_zeta_lipschitz = lb * std::abs(dz) - std::abs(dnu);
  s.nu_product = lb * lz * dz * db - dnu * dnu;
  s.growth_lower = bb - (k.K1 * ba * ba - k.K2);
  s.growth_upper = k.K3 * a * a - bb;
  s.uniform_convexity = pair.convexity_gap(a, b);
  return s;
}

bool ValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const HypothesisCheck& c) { return c.passed; });
}

const HypothesisCheck* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

ValidationReport verify_pair_hypotheses(const NonlinearityPair& pair,
                                        std::span<const double> grid,
                                        std::optional<double> p, double tolerance) {
  if (grid.empty()) throw InvalidArgument("hypothesis check needs a nonempty sample grid");
  ValidationReport report;
  report.L_beta = pair.lipschitz_beta();
  report.L_zeta = pair.lipschitz_zeta();

  auto track = [](HypothesisCheck& check, double slack, double a, double b) {
    if (slack < check.worst_slack || !check.witness_a) {
      check.worst_slack = slack;
      check.witness_a = a;
      check.witness_b = b;
    }
  };

  // Monotone and Lipschitz on every grid pair.
  auto monotone_lipschitz = [&](const char* name, auto&& f, double lip) {
    HypothesisCheck check{name};
    check.worst_slack = kInf;
    for (double a : grid) {
      for (double b : grid) {
        if (a >= b) continue;
        const double rise = f(b) - f(a);
        const double slack = std::min(rise, lip * (b - a) - rise);
        track(check, slack, a, b);
      }
    }
    if (!std::isfinite(check.worst_slack)) check.worst_slack = 0.0;
    check.passed = check.worst_slack >= -tolerance;
    return check;
  };
  report.checks.push_back(monotone_lipschitz(
      "beta_monotone_lipschitz", [&](double s) { return pair.beta()(s); }, report.L_beta));
  report.checks.push_back(monotone_lipschitz(
      "zeta_monotone_lipschitz", [&](double s) { return pair.zeta()(s); }, report.L_zeta));
  report.checks.push_back(monotone_lipschitz(
      "nu_monotone_lipschitz", [&](double s) { return pair.nu(s); },
      report.L_beta * report.L_zeta));

  {
    HypothesisCheck check{"vanish_at_zero"};
    check.worst_slack = -std::max({std::abs(pair.beta()(0.0)), std::abs(pair.zeta()(0.0)),
                                   std::abs(pair.nu(0.0))});
    check.passed = check.worst_slack >= -tolerance;
    report.checks.push_back(check);
  }

  // Coercivity of zeta.
  {
    HypothesisCheck check{"zeta_coercivity"};
    const Coercivity c = pair.zeta_coercivity().value_or(fit_coercivity(pair.zeta()));
    report.zeta_coercivity = c;
    if (!(c.slope > 0.0)) {
      check.passed = false;
      const bool left_flat = pair.zeta().left_slope() <= 0.0;
      const double witness = left_flat ? *std::min_element(grid.begin(), grid.end())
                                       : *std::max_element(grid.begin(), grid.end());
      check.witness_a = witness;
      check.worst_slack = -std::abs(witness);
      std::ostringstream os;
      os << "zeta is bounded on the " << (left_flat ? "left" : "right")
         << " tail, so |zeta(s)| >= M1|s| - M2 fails for every M1 > 0 (zeta(" << witness
         << ") = " << pair.zeta()(witness) << ")";
      check.detail = os.str();
    } else {
      check.worst_slack = kInf;
      for (double s : grid) {
        track(check, std::abs(pair.zeta()(s)) - (c.slope * std::abs(s) - c.offset), s, s);
      }
      check.passed = check.worst_slack >= -tolerance;
      std::ostringstream os;
      os << "M1 = " << c.slope << ", M2 = " << c.offset;
      check.detail = os.str();
    }
    report.checks.push_back(check);
  }

  {
    const Coercivity c = pair.beta_coercivity().value_or(fit_coercivity(pair.beta()));
    if (c.slope > 0.0) report.beta_coercivity = c;
  }

  // Inequality suite over every ordered grid pair.
  std::optional<GrowthConstants> growth;
  try {
    growth = fit_growth_constants(pair);
  } catch (const Error& e) {
    HypothesisCheck check{"growth_constants"};
    check.passed = false;
    check.detail = e.what();
    report.checks.push_back(check);
  }
  if (growth) {
    report.growth = *growth;
    HypothesisCheck lip{"nu_zeta_lipschitz"};
    HypothesisCheck prod{"nu_product"};
    HypothesisCheck lower{"growth_lower"};
    HypothesisCheck upper{"growth_upper"};
    HypothesisCheck conv{"uniform_convexity"};
    HypothesisCheck relb{"b_of_beta_consistency"};
    for (auto* c : {&lip, &prod, &lower, &upper, &conv, &relb}) c->worst_slack = kInf;
    for (double a : grid) {
      const double via_inverse = pair.B(pair.beta()(a));
      const double via_integral = pair.B_of_beta(a);
      track(relb, -std::abs(via_inverse - via_integral), a, a);
      for (double b : grid) {
        const InequalitySlacks s = inequality_slacks(pair, *growth, a, b);
        track(lip, s.nu_zeta_lipschitz, a, b);
        track(prod, s.nu_product, a, b);
        track(lower, s.growth_lower, a, a);
        track(upper, s.growth_upper, a, a);
        track(conv, s.uniform_convexity, a, b);
      }
    }
    std::ostringstream os;
    os << "K1 = " << growth->K1 << ", K2 = " << growth->K2 << ", K3 = " << growth->K3;
    lower.detail = upper.detail = os.str();
    for (auto* c : {&lip, &prod, &lower, &upper, &conv, &relb}) {
      c->passed = c->worst_slack >= -tolerance;
      report.checks.push_back(*c);
    }
  }

  if (p) {
    HypothesisCheck check{"exponent_case"};
    report.exponent_case = classify_exponent(pair, *p);
    check.passed = report.exponent_case.has_value();
    std::ostringstream os;
    if (report.exponent_case) {
      os << "p = " << *p << " falls in case " << to_string(*report.exponent_case);
    } else if (*p < 2.0 && !report.beta_coercivity) {
      os << "p = " << *p << " < 2 requires |beta(s)| >= M3|s| - M4, but beta is bounded";
    } else {
      os << "p = " << *p << " <= 2/3 requires beta strictly increasing";
    }
    check.detail = os.str();
    if (pair.exponent_case() && report.exponent_case &&
        *pair.exponent_case() != *report.exponent_case) {
      check.passed = false;
      check.detail += std::string("; declared case ") + to_string(*pair.exponent_case());
    }
    report.checks.push_back(check);
  }
  return report;
}

}  // namespace dnstab::monotone
