// Acceptance run: one line per criterion, nonzero exit when any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dnstab/dual/dual.hpp"
#include "dnstab/metrics/translates.hpp"
#include "dnstab/monotone/hypotheses.hpp"
#include "dnstab/monotone/monotone_graph.hpp"
#include "dnstab/monotone/presets.hpp"
#include "dnstab/solver/energy.hpp"
#include "dnstab/solver/manufactured.hpp"
#include "dnstab/solver/problems.hpp"
#include "dnstab/solver/step.hpp"
#include "dnstab/stability/sweep.hpp"

using namespace dnstab;
namespace presets = monotone::presets;
namespace problems = solver::problems;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

const std::vector<std::string> kCalculusPresets{"identity", "stefan", "richards-saturation",
                                                "step-graph"};

Outcome calculus_consistency() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> draw(-10.0, 10.0);
  double worst = 0.0;
  for (const auto& name : kCalculusPresets) {
    const auto pair = presets::pair_by_name(name);
    for (int i = 0; i < 10000; ++i) {
      const double s = draw(rng);
      worst = std::max(worst, std::abs(pair.B(pair.beta()(s)) - pair.B_of_beta(s)));
    }
  }
  return {worst <= 1e-10, fmt("max |B(beta(s)) - B_of_beta(s)| = %.2e over 4 x 10^4 samples", worst)};
}

Outcome inequality_suite() {
  std::mt19937_64 rng(20240602);
  std::uniform_real_distribution<double> draw(-10.0, 10.0);
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& name : kCalculusPresets) {
    const auto pair = presets::pair_by_name(name);
    const auto k = monotone::fit_growth_constants(pair);
    for (int i = 0; i < 10000; ++i) {
      worst = std::min(worst, monotone::inequality_slacks(pair, k, draw(rng), draw(rng)).min());
    }
  }
  const auto id = presets::identity();
  const double equality =
      std::abs(monotone::inequality_slacks(id, monotone::fit_growth_constants(id), 1.0, 0.0)
                   .uniform_convexity);
  return {worst >= -1e-10 && equality <= 1e-12,
          fmt("min slack %.2e, identity convexity gap at (1, 0) %.1e", worst, equality)};
}

Outcome resolvent_round_trip() {
  double worst = 0.0;
  double slope_excess = 0.0;
  for (const auto& g : presets::graphs::all()) {
    const auto pair = monotone::resolvent_decompose(g);
    worst = std::max(worst, monotone::hausdorff_distance(g, monotone::recompose_graph(pair)));
    for (double x = -5.0; x <= 5.0; x += 0.01) {
      for (double d : {pair.beta().derivative(x), pair.zeta().derivative(x)}) {
        slope_excess = std::max({slope_excess, -d, d - 1.0});
      }
    }
  }
  return {worst < 1e-12 && slope_excess <= 0.0,
          fmt("max Hausdorff distance %.1e on 5 graphs, slopes in [0, 1]%s", worst,
              slope_excess <= 0.0 ? "" : " violated")};
}

Outcome heat_oracle() {
  const auto spec = problems::heat();
  auto error = [&](std::size_t n, std::size_t steps) {
    const auto sol = solver::solve(spec, fem::build_mesh(n), solver::TimeGrid::uniform(0.1, steps));
    return solver::manufactured_error(sol, solver::heat_exact, solver::Field::kU).sup_time_l2;
  };
  const double coarse = error(64, 100);
  const double fine = error(128, 200);
  const double ratio = coarse / fine;
  return {coarse <= 1e-2 && ratio >= 1.7,
          fmt("error %.3e at n=64, %.3e at n=128, ratio %.2f", coarse, fine, ratio)};
}

Outcome energy_matrix() {
  const auto mesh = fem::build_mesh(64);
  std::ostringstream detail;
  bool ok = true;
  for (const auto& spec : {problems::heat(), problems::stefan(), problems::richards(),
                           problems::p_laplace(1.5), problems::p_laplace(3.0)}) {
    const auto grid = solver::TimeGrid::with_step(spec.horizon, 1e-3);
    const auto sol = solver::solve(spec, mesh, grid);
    const auto audit = solver::energy_audit(sol, spec);
    const auto apriori = solver::check_apriori(sol, spec);
    const bool row = audit.min_step_slack >= -1e-9 && audit.global_ok() &&
                     audit.max_energy_increase <= 1e-9 && apriori.passed;
    if (!row) detail << spec.name << " failed; ";
    ok = ok && row;
  }
  detail << "heat, stefan, richards, p-laplace 1.5 and 3 audited";
  return {ok, detail.str()};
}

Outcome stability_sweeps() {
  const auto mesh = fem::build_mesh(64);
  const std::vector<int> indices{2, 4, 8, 16, 32};
  std::ostringstream detail;
  bool ok = true;
  for (const auto& base : {problems::heat(), problems::stefan()}) {
    const auto grid = solver::TimeGrid::with_step(base.horizon, 1e-3);
    const auto reference = solver::solve(base, mesh, grid);
    for (auto kind : {stability::FamilyKind::kDelta, stability::FamilyKind::kMollified}) {
      const auto family = stability::make_family(base, kind, indices);
      const auto report = stability::run_sweep(family, mesh, grid, {}, reference);
      const bool row = !report.any_failed() && report.trends_passed();
      detail << base.name << "/" << stability::to_string(kind) << (row ? " ok" : " FAIL");
      if (!row) {
        for (const auto& t : report.trends) {
          detail << " [" << t.metric << " " << t.first << " -> " << t.last << "]";
        }
      }
      detail << (base.name == "stefan" && kind == stability::FamilyKind::kMollified ? "" : ", ");
      ok = ok && row;
    }
  }
  return {ok, detail.str()};
}

Outcome translate_exponent() {
  const auto spec = problems::heat();
  const auto mesh = fem::build_mesh(64);
  const auto grid = solver::TimeGrid::uniform(0.1, 100);
  const auto sol = solver::solve(spec, mesh, grid);
  const auto profile = metrics::time_translate_profile(mesh, grid, sol.nu, {1, 2, 4, 8, 16});
  const double e = profile.exponent.value_or(-1.0);
  return {e >= 0.45, fmt("fitted exponent %.3f over shifts of 1..16 steps", e)};
}

Outcome dual_uniqueness() {
  // (a) pointwise ratios
  double worst_ratio = 0.0;
  for (double eps : {0.2, 0.1, 0.05}) {
    for (int i = 0; i <= 1000; ++i) {
      const auto r = dual::q_ratios(i / 1000.0, eps);
      worst_ratio = std::max({worst_ratio, r.below / eps, r.above / eps});
    }
  }
  const bool ratios_ok = worst_ratio <= 1.0 + 1e-12;

  // (b) energy on three coefficient configurations
  const auto mesh = fem::build_mesh(64);
  const auto grid = solver::TimeGrid::uniform(0.1, 100);
  const double pi = std::numbers::pi;
  std::vector<dual::DualProblemSpec> configs;
  configs.push_back({dual::sample(mesh, grid, [](double, double) { return 0.5; }),
                     fem::FluxLaw::linear(), dual::sine_bump(0.1), 0.25});
  configs.push_back({dual::sample(mesh, grid,
                                  [pi](double x, double t) {
                                    return std::sin(7 * pi * x) * std::cos(30 * pi * t) > 0
                                               ? 1e-3
                                               : 1.0 - 1e-3;
                                  }),
                     fem::FluxLaw::linear(), dual::sine_bump(0.1), 1e-3});
  configs.push_back({dual::sample(mesh, grid,
                                  [pi](double x, double t) {
                                    return 0.5 + 0.4 * std::sin(3 * pi * x) * std::cos(20 * pi * t);
                                  }),
                     fem::FluxLaw::linear_hetero(
                         [pi](double x) { return 1.0 + 0.5 * std::sin(2 * pi * x); }, 0.5, 1.5),
                     [pi](double x, double t) {
                       return std::sin(pi * x) * std::sin(2 * pi * x) * std::sin(pi * t / 0.1);
                     },
                     0.1});
  double worst_slack = std::numeric_limits<double>::infinity();
  for (const auto& spec : configs) {
    const auto psi = dual::solve_dual_backward(spec, mesh, grid);
    worst_slack = std::min(worst_slack, dual::dual_energy_check(psi, spec).slack());
  }
  const bool energy_ok = worst_slack >= 0.0;

  // (c) two solves of one degenerate problem from different Newton starts
  const auto spec = problems::common_plateau();
  solver::SolverConfig c1;
  c1.auto_delta = false;
  c1.initial_guess_shift = -1.0;
  solver::SolverConfig c2 = c1;
  c2.initial_guess_shift = 1.0;
  const auto s1 = solver::solve(spec, mesh, grid, c1);
  const auto s2 = solver::solve(spec, mesh, grid, c2);
  double du = 0.0, db = 0.0, dz = 0.0;
  for (std::size_t k = 0; k < s1.u.size(); ++k) {
    for (std::size_t i = 0; i < mesh.n_nodes(); ++i) {
      du = std::max(du, std::abs(s1.u[k][i] - s2.u[k][i]));
      db = std::max(db, std::abs(s1.beta[k][i] - s2.beta[k][i]));
      dz = std::max(dz, std::abs(s1.zeta[k][i] - s2.zeta[k][i]));
    }
  }
  const auto rows =
      dual::uniqueness_witness(s1, s2, spec.flux, dual::sine_bump(spec.horizon), {0.2, 0.1, 0.05});
  double worst_witness = 0.0;
  bool chain_ok = true;
  for (const auto& r : rows) {
    worst_witness = std::max(worst_witness, r.witness);
    chain_ok = chain_ok && r.witness <= r.bound && r.energy_lhs <= r.energy_rhs;
  }
  const bool witness_ok = chain_ok && worst_witness <= 1e-8 && db <= 1e-8 && dz <= 1e-8 && du > 0.5;

  return {ratios_ok && energy_ok && witness_ok,
          fmt("(a) ratio/eps <= %.6f (b) min energy slack %.3e (c) witness %.1e, "
              "|du| %.2f, |dbeta| %.1e, |dzeta| %.1e",
              worst_ratio, worst_slack, worst_witness, du, db, dz)};
}

Outcome jacobian_check() {
  struct Case {
    std::string name;
    monotone::NonlinearityPair pair;
    fem::FluxLaw flux;
  };
  std::vector<Case> cases;
  for (const auto& name : presets::pair_names()) {
    cases.push_back({name, presets::pair_by_name(name), fem::FluxLaw::linear()});
  }
  cases.push_back({"richards-mobility", presets::richards_saturation(), fem::FluxLaw::mobility()});
  cases.push_back({"p-laplace-1.5", presets::identity(), fem::FluxLaw::p_laplace(1.5)});
  cases.push_back({"p-laplace-3", presets::identity(), fem::FluxLaw::p_laplace(3.0)});

  const auto mesh = fem::build_mesh(24);
  std::mt19937_64 rng(20240609);
  std::uniform_real_distribution<double> draw(-3.0, 3.0);
  double worst = 0.0;
  std::string worst_case;
  for (const auto& c : cases) {
    for (int state = 0; state < 10; ++state) {
      std::vector<double> prev(mesh.n_nodes(), 0.0), u(prev), v(prev), f(prev);
      for (std::size_t i = 1; i + 1 < u.size(); ++i) {
        prev[i] = draw(rng);
        u[i] = draw(rng);
        v[i] = draw(rng);
        f[i] = draw(rng);
      }
      const solver::StepSystem sys(mesh, c.pair, c.flux, prev, f, 1e-2);
      const auto jv = sys.jacobian(u).apply(v);
      const double h = 1e-6;
      auto up = u, um = u;
      for (std::size_t i = 0; i < u.size(); ++i) {
        up[i] += h * v[i];
        um[i] -= h * v[i];
      }
      const auto rp = sys.residual(up), rm = sys.residual(um);
      double diff = 0.0, scale = 1.0;
      for (std::size_t i = 0; i < u.size(); ++i) {
        const double fd = (rp[i] - rm[i]) / (2 * h);
        diff = std::max(diff, std::abs(jv[i] - fd));
        scale = std::max(scale, std::abs(fd));
      }
      if (diff / scale > worst) {
        worst = diff / scale;
        worst_case = c.name;
      }
    }
  }
  return {worst <= 1e-5, fmt("max relative error %.2e over %zu cases x 10 states%s%s", worst,
                             cases.size(), worst_case.empty() ? "" : ", worst ",
                             worst_case.c_str())};
}

struct Criterion {
  int id;
  const char* title;
  double time_limit;  // seconds
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "monotone calculus consistency", 5.0, calculus_consistency},
      {2, "inequality suite", 10.0, inequality_suite},
      {3, "resolvent round trip", 60.0, resolvent_round_trip},
      {4, "heat equation oracle", 10.0, heat_oracle},
      {5, "energy audits", 60.0, energy_matrix},
      {6, "stability sweeps", 120.0, stability_sweeps},
      {7, "time translate exponent", 60.0, translate_exponent},
      {8, "dual uniqueness", 60.0, dual_uniqueness},
      {9, "jacobian correctness", 60.0, jacobian_check},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("threw: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool passed = out.passed && secs <= c.time_limit;
    if (!passed) ++failures;
    std::printf("[%s] %d %s: %s (%.2f s%s)\n", passed ? "PASS" : "FAIL", c.id, c.title,
                out.detail.c_str(), secs, secs <= c.time_limit ? "" : ", over time limit");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
