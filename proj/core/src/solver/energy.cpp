#include "dnstab/solver/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/minima.hpp>

#include "dnstab/errors.hpp"
#include "dnstab/fem/assembly.hpp"
#include "dnstab/solver/step.hpp"

namespace dnstab::solver {

namespace {

double weighted_sum(std::span<const double> m, std::span<const double> v) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) s += m[i] * v[i];
  return s;
}

double euclid(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

double dual_sobolev_norm(const fem::Mesh1D& mesh, std::span<const double> g, double q) {
  fem::require_nodal(mesh, g, "functional");
  if (!(q > 1.0)) throw InvalidArgument("dual exponent must exceed 1");
  const std::size_t cells = mesh.n_cells();
  std::vector<double> tail(cells, 0.0);
  double acc = 0.0;
  for (std::size_t c = cells; c-- > 0;) {
    acc += g[c + 1];
    tail[c] = acc;
  }
  auto objective = [&](double kappa) {
    double s = 0.0;
    for (std::size_t c = 0; c < cells; ++c) s += mesh.h(c) * std::pow(std::abs(tail[c] - kappa), q);
    return s;
  };
  const auto [lo, hi] = std::minmax_element(tail.begin(), tail.end());
  if (*hi - *lo == 0.0) return std::pow(objective(*lo), 1.0 / q);
  const auto best = boost::math::tools::brent_find_minima(
      objective, *lo, *hi, std::numeric_limits<double>::digits / 2);
  return std::pow(std::min(best.second, std::min(objective(*lo), objective(*hi))), 1.0 / q);
}

EnergyAudit energy_audit(const DiscreteSolution& sol, const ProblemSpec& spec) {
  const auto& mesh = sol.mesh;
  const auto& pair = sol.pair;
  const auto m = fem::lumped_mass(mesh);
  const std::size_t slices = sol.u.size();
  if (slices == 0) throw InvalidArgument("energy audit of an empty solution");
  const double p = spec.flux.p();
  const double q = spec.flux.p_conjugate();

  EnergyAudit audit;
  std::vector<std::vector<double>> bb(slices);
  audit.energy.resize(slices);
  for (std::size_t k = 0; k < slices; ++k) {
    bb[k].resize(mesh.n_nodes());
    for (std::size_t i = 0; i < mesh.n_nodes(); ++i) bb[k][i] = pair.B_of_beta(sol.u[k][i]);
    audit.energy[k] = weighted_sum(m, bb[k]);
    audit.sup_energy = std::max(audit.sup_energy, audit.energy[k]);
    audit.sup_beta_l2 = std::max(audit.sup_beta_l2, fem::l2_norm(mesh, sol.beta[k]));
  }

  double flux_total = 0.0;
  double source_total = 0.0;
  double residual_allowance = 0.0;
  double grad_power = 0.0;
  double dt_power = 0.0;
  audit.min_step_slack = std::numeric_limits<double>::infinity();
  audit.max_energy_increase = -std::numeric_limits<double>::infinity();
  double magnitude = 1.0;
  for (std::size_t k = 0; k + 1 < slices; ++k) {
    const double tau = sol.grid.tau(k);
    const double t_next = sol.grid.t(k + 1);
    double coupling = 0.0;
    std::vector<double> dbeta(mesh.n_nodes(), 0.0);
    for (std::size_t i = 0; i < mesh.n_nodes(); ++i) {
      coupling += m[i] * sol.zeta[k + 1][i] * (sol.beta[k + 1][i] - sol.beta[k][i]);
      if (i > 0 && i + 1 < mesh.n_nodes()) {
        dbeta[i] = m[i] * (sol.beta[k + 1][i] - sol.beta[k][i]) / tau;
      }
    }
    const double de = audit.energy[k + 1] - audit.energy[k];
    const double slack = coupling - de;
    audit.step_slack.push_back(slack);
    audit.min_step_slack = std::min(audit.min_step_slack, slack);
    audit.max_energy_increase = std::max(audit.max_energy_increase, de);

    const double work = fem::flux_work(mesh, spec.flux, sol.nu[k + 1], sol.zeta[k + 1]);
    flux_total += tau * work;
    double fz = 0.0;
    for (std::size_t i = 1; i + 1 < mesh.n_nodes(); ++i) {
      fz += m[i] * spec.source(mesh.x(i), t_next) * sol.zeta[k + 1][i];
    }
    source_total += tau * fz;
    magnitude = std::max({magnitude, std::abs(coupling), std::abs(tau * work)});
    if (k < sol.stats.size()) {
      residual_allowance += sol.stats[k].residual * euclid(sol.zeta[k + 1]);
    }
    grad_power += tau * fem::gradient_power(mesh, sol.zeta[k + 1], p);
    dt_power += tau * std::pow(dual_sobolev_norm(mesh, dbeta, q), q);
  }
  if (slices == 1) {
    audit.min_step_slack = 0.0;
    audit.max_energy_increase = 0.0;
  }
  magnitude = std::max({magnitude, audit.sup_energy, flux_total});
  audit.tolerance = 1e-9 * magnitude + residual_allowance;
  audit.global_lhs = audit.energy.back() + flux_total;
  audit.global_rhs = audit.energy.front() + source_total;
  audit.global_slack = audit.global_rhs - audit.global_lhs;
  audit.zeta_w1p_norm = std::pow(grad_power, 1.0 / p);
  audit.dt_beta_dual_norm = std::pow(dt_power, 1.0 / q);
  return audit;
}

AprioriBounds apriori_bounds(const ProblemSpec& spec, const fem::Mesh1D& mesh,
                             const TimeGrid& grid, double delta) {
  const auto pair = spec.pair.regularized(delta);
  AprioriBounds b;
  b.K3 = monotone::fit_growth_constants(pair).K3;
  const auto u0 = initial_slice(spec, mesh);
  const auto m = fem::lumped_mass(mesh);
  for (std::size_t i = 0; i < u0.size(); ++i) b.u0_l2_squared += m[i] * u0[i] * u0[i];

  const double p = spec.flux.p();
  const double q = spec.flux.p_conjugate();
  const double a = spec.flux.a_lower();
  double fq = 0.0;
  for (std::size_t k = 0; k < grid.steps(); ++k) {
    double l1 = 0.0;
    for (std::size_t i = 1; i + 1 < mesh.n_nodes(); ++i) {
      l1 += m[i] * std::abs(spec.source(mesh.x(i), grid.t(k + 1)));
    }
    fq += grid.tau(k) * std::pow(l1, q);
  }
  b.source_norm = std::pow(fq, 1.0 / q);
  b.theta_term = spec.flux.theta() * grid.horizon();
  const double young = (1.0 / q) * std::pow(2.0 / (a * p), q / p) * fq;
  b.energy_bound = b.K3 * b.u0_l2_squared + b.theta_term + young;
  b.gradient_bound = (2.0 / a) * b.energy_bound;
  return b;
}

AprioriCheck check_apriori(const DiscreteSolution& sol, const ProblemSpec& spec, double factor) {
  AprioriCheck c;
  c.factor = factor;
  c.bounds = apriori_bounds(spec, sol.mesh, sol.grid, sol.delta);
  const double p = spec.flux.p();
  for (std::size_t k = 0; k + 1 < sol.u.size(); ++k) {
    c.observed_gradient += sol.grid.tau(k) * fem::gradient_power(sol.mesh, sol.zeta[k + 1], p);
  }
  const auto m = fem::lumped_mass(sol.mesh);
  for (const auto& slice : sol.u) {
    double e = 0.0;
    for (std::size_t i = 0; i < slice.size(); ++i) e += m[i] * sol.pair.B_of_beta(slice[i]);
    c.observed_energy = std::max(c.observed_energy, e);
  }
  c.passed = c.observed_gradient <= factor * c.bounds.gradient_bound &&
             c.observed_energy <= factor * c.bounds.energy_bound;
  return c;
}

}  // namespace dnstab::solver
