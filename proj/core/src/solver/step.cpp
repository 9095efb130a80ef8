#include "dnstab/solver/step.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dnstab/errors.hpp"
#include "dnstab/fem/assembly.hpp"

namespace dnstab::solver {

namespace {

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

SumChart::SumChart(const monotone::NonlinearityPair& pair)
    : sigma_(monotone::ScalarNonlinearity::linear()),
      beta_(monotone::ScalarNonlinearity::linear()),
      zeta_(monotone::ScalarNonlinearity::linear()),
      nu_(monotone::ScalarNonlinearity::linear()) {
  if (!pair.piecewise_linear()) throw InvalidArgument("sum chart needs a piecewise-linear pair");
  const auto& b = pair.beta();
  const auto& z = pair.zeta();
  knots_ = pair.knots();
  const double bl = b.left_slope();
  const double zl = z.left_slope();
  const double br = b.right_slope();
  const double zr = z.right_slope();
  if (!(bl + zl > 0.0 && br + zr > 0.0)) {
    throw InvalidArgument("beta + zeta must grow in both tails");
  }
  std::vector<double> s_nodes, b_vals, z_vals, nu_vals;
  for (double k : knots_) {
    const double s = b(k) + z(k);
    sigma_at_.push_back(s);
    if (!s_nodes.empty() && s <= s_nodes.back()) continue;
    s_nodes.push_back(s);
    b_vals.push_back(b(k));
    z_vals.push_back(z(k));
    nu_vals.push_back(pair.nu(k));
  }
  sigma_ = monotone::ScalarNonlinearity::piecewise_linear(knots_, sigma_at_, bl + zl, br + zr);
  beta_ = monotone::ScalarNonlinearity::piecewise_linear(s_nodes, b_vals, bl / (bl + zl),
                                                         br / (br + zr));
  zeta_ = monotone::ScalarNonlinearity::piecewise_linear(s_nodes, z_vals, zl / (bl + zl),
                                                         zr / (br + zr));
  nu_ = monotone::ScalarNonlinearity::piecewise_linear(s_nodes, nu_vals, bl * zl / (bl + zl),
                                                       br * zr / (br + zr));
}

double SumChart::recover(double s, double guess) const {
  const double tol = 1e-11 * (1.0 + std::abs(s));
  const auto lo = std::lower_bound(sigma_at_.begin(), sigma_at_.end(), s - tol);
  const auto hi = std::upper_bound(sigma_at_.begin(), sigma_at_.end(), s + tol);
  if (hi - lo >= 2) {
    const double a = knots_[static_cast<std::size_t>(lo - sigma_at_.begin())];
    const double c = knots_[static_cast<std::size_t>(hi - sigma_at_.begin()) - 1];
    if (c > a) return std::clamp(guess, a, c);
  }
  if (s <= sigma_at_.front()) return knots_.front() + (s - sigma_at_.front()) / sigma_.left_slope();
  if (s >= sigma_at_.back()) return knots_.back() + (s - sigma_at_.back()) / sigma_.right_slope();
  const auto j = static_cast<std::size_t>(
      std::upper_bound(sigma_at_.begin(), sigma_at_.end(), s) - sigma_at_.begin()) - 1;
  const double ds = sigma_at_[j + 1] - sigma_at_[j];
  if (ds <= 0.0) return std::clamp(guess, knots_[j], knots_[j + 1]);
  return knots_[j] + (s - sigma_at_[j]) * (knots_[j + 1] - knots_[j]) / ds;
}

bool has_common_plateau(const monotone::NonlinearityPair& pair) {
  if (!pair.piecewise_linear()) return false;
  const auto& k = pair.knots();
  for (std::size_t j = 0; j + 1 < k.size(); ++j) {
    const double mid = 0.5 * (k[j] + k[j + 1]);
    if (pair.beta().derivative(mid) == 0.0 && pair.zeta().derivative(mid) == 0.0) return true;
  }
  return false;
}

StepSystem::StepSystem(const fem::Mesh1D& mesh, Law law, const fem::FluxLaw& flux,
                       std::span<const double> previous, std::span<const double> source_next,
                       double tau)
    : mesh_(mesh),
      law_(std::move(law)),
      flux_(flux),
      mass_(fem::lumped_mass(mesh)),
      source_(source_next.begin(), source_next.end()),
      tau_(tau) {
  fem::require_nodal(mesh, previous, "previous slice");
  fem::require_nodal(mesh, source_next, "source slice");
  if (!(tau > 0.0)) throw InvalidArgument("time step must be positive");
  previous_beta_.resize(previous.size());
  for (std::size_t i = 0; i < previous.size(); ++i) previous_beta_[i] = law_.beta(previous[i]);
}

StepSystem::StepSystem(const fem::Mesh1D& mesh, const monotone::NonlinearityPair& pair,
                       const fem::FluxLaw& flux, std::span<const double> previous,
                       std::span<const double> source_next, double tau)
    : StepSystem(mesh,
                 Law{pair.beta(), [b = pair.beta()](double s) { return b.derivative(s); },
                     pair.zeta(), [z = pair.zeta()](double s) { return z.derivative(s); },
                     [pair](double s) { return pair.nu(s); },
                     [pair](double s) { return pair.nu_derivative(s); }},
                 flux, previous, source_next, tau) {}

StepSystem::StepSystem(const fem::Mesh1D& mesh, const SumChart& chart, const fem::FluxLaw& flux,
                       std::span<const double> previous_s, std::span<const double> source_next,
                       double tau)
    : StepSystem(mesh,
                 Law{chart.beta(), [b = chart.beta()](double s) { return b.derivative(s); },
                     chart.zeta(), [z = chart.zeta()](double s) { return z.derivative(s); },
                     chart.nu(), [n = chart.nu()](double s) { return n.derivative(s); }},
                 flux, previous_s, source_next, tau) {}

fem::NodalField StepSystem::residual(std::span<const double> u) const {
  fem::require_nodal(mesh_, u, "iterate");
  const std::size_t n = u.size();
  std::vector<double> nu(n);
  std::vector<double> zeta(n);
  for (std::size_t i = 0; i < n; ++i) {
    nu[i] = law_.nu(u[i]);
    zeta[i] = law_.zeta(u[i]);
  }
  fem::NodalField r = fem::assemble_flux_residual(mesh_, flux_, nu, zeta);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    r[i] = mass_[i] * (law_.beta(u[i]) - previous_beta_[i]) + tau_ * r[i] -
           tau_ * mass_[i] * source_[i];
  }
  r.front() = u.front();
  r.back() = u.back();
  return r;
}

Tridiagonal StepSystem::jacobian(std::span<const double> u, double beta_floor,
                                 double zeta_floor) const {
  fem::require_nodal(mesh_, u, "iterate");
  const std::size_t n = u.size();
  std::vector<double> nu(n), dnu(n), zeta(n), dzeta(n), dbeta(n);
  for (std::size_t i = 0; i < n; ++i) {
    nu[i] = law_.nu(u[i]);
    dnu[i] = law_.dnu(u[i]);
    zeta[i] = law_.zeta(u[i]);
    dzeta[i] = std::max(law_.dzeta(u[i]), zeta_floor);
    dbeta[i] = std::max(law_.dbeta(u[i]), beta_floor);
  }
  Tridiagonal j(n);
  for (std::size_t i = 1; i + 1 < n; ++i) j.diag[i] = mass_[i] * dbeta[i];
  for (std::size_t c = 0; c < mesh_.n_cells(); ++c) {
    const double h = mesh_.h(c);
    const double xm = mesh_.midpoint(c);
    const double xi = (zeta[c + 1] - zeta[c]) / h;
    const double s = 0.5 * (nu[c] + nu[c + 1]);
    const double a_xi = flux_.d_xi(xm, s, xi);
    const double a_s = flux_.d_s(xm, s, xi);
    const double d_left = tau_ * (0.5 * a_s * dnu[c] - a_xi * dzeta[c] / h);
    const double d_right = tau_ * (0.5 * a_s * dnu[c + 1] + a_xi * dzeta[c + 1] / h);
    // Row c carries -A, row c+1 carries +A.
    if (c >= 1) {
      j.diag[c] -= d_left;
      j.upper[c] -= d_right;
    }
    if (c + 1 < n - 1) {
      j.lower[c] += d_left;
      j.diag[c + 1] += d_right;
    }
  }
  j.diag.front() = 1.0;
  j.diag.back() = 1.0;
  j.upper.front() = 0.0;
  j.lower.back() = 0.0;
  return j;
}

namespace {

struct Floors {
  double beta = 0.0;
  double zeta = 0.0;
};

/// Newton on x. With `full_steps` every step is taken undamped (semismooth
/// Newton on piecewise-linear laws converges this way even when the merit
/// rises on the way); otherwise a nonmonotone Armijo test compares against
/// the largest merit of the last few iterates. x ends at the best iterate.
bool newton_solve(const StepSystem& system, fem::NodalField& x, const SolverConfig& config,
                  Floors floors, bool full_steps, StepStats& local,
                  std::vector<int>& history) {
  constexpr std::size_t kMemory = 8;
  const std::size_t n = x.size();
  fem::NodalField r = system.residual(x);
  double norm = norm2(r);
  std::vector<double> recent{0.5 * norm * norm};
  fem::NodalField best = x;
  double best_norm = norm;

  for (int it = 0; it < config.max_newton && norm > config.newton_tol; ++it) {
    const Tridiagonal j = system.jacobian(x, floors.beta, floors.zeta);
    std::vector<double> rhs(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) rhs[i] = -r[i];
    std::vector<double> d;
    try {
      d = solve_tridiagonal(j, std::move(rhs));
    } catch (const InvariantViolation&) {
      break;
    }
    ++local.newton_iterations;
    const double phi0 = 0.5 * norm * norm;
    const double ref = *std::max_element(recent.begin(), recent.end());
    double lambda = 1.0;
    bool accepted = false;
    int halvings = 0;
    for (; halvings <= config.max_halvings; ++halvings) {
      fem::NodalField trial(x);
      for (std::size_t i = 0; i < n; ++i) trial[i] += lambda * d[i];
      fem::NodalField rt = system.residual(trial);
      const double nt = norm2(rt);
      const bool finite = std::isfinite(nt);
      if ((full_steps && finite) || 0.5 * nt * nt <= ref - 2e-4 * lambda * phi0 ||
          nt <= config.newton_tol) {
        x = std::move(trial);
        r = std::move(rt);
        norm = nt;
        accepted = true;
        break;
      }
      lambda *= config.damping;
    }
    history.push_back(halvings);
    local.halvings += halvings;
    if (!accepted) break;
    recent.push_back(0.5 * norm * norm);
    if (recent.size() > kMemory) recent.erase(recent.begin());
    if (norm < best_norm) {
      best = x;
      best_norm = norm;
    }
  }
  if (norm > best_norm) {
    x = std::move(best);
    norm = best_norm;
  }
  local.residual = norm;
  return norm <= config.newton_tol;
}

/// Damped Picard-type fallback: Jacobian with slopes bounded away from 0.
bool picard_solve(const StepSystem& system, fem::NodalField& x, const SolverConfig& config,
                  Floors floors, StepStats& local) {
  const std::size_t n = x.size();
  fem::NodalField r = system.residual(x);
  double norm = norm2(r);
  for (int it = 0; it < config.picard_iterations && norm > config.newton_tol; ++it) {
    const Tridiagonal j = system.jacobian(x, floors.beta, floors.zeta);
    std::vector<double> rhs(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) rhs[i] = -r[i];
    const std::vector<double> d = solve_tridiagonal(j, std::move(rhs));
    ++local.picard_iterations;
    double lambda = 1.0;
    bool improved = false;
    for (int h = 0; h <= config.max_halvings; ++h) {
      fem::NodalField trial(x);
      for (std::size_t i = 0; i < n; ++i) trial[i] += lambda * d[i];
      fem::NodalField rt = system.residual(trial);
      const double nt = norm2(rt);
      if (nt < norm) {
        x = std::move(trial);
        r = std::move(rt);
        norm = nt;
        improved = true;
        break;
      }
      lambda *= config.damping;
    }
    if (!improved) break;
  }
  local.residual = norm;
  return norm <= config.newton_tol;
}

/// Newton at the full step, then Newton along tau / 2^m, ..., tau / 2, tau
/// (each level starting from the previous one), then Picard. Every stage
/// solves the same discrete system at the end; the shorter steps only supply
/// a starting point.
template <class MakeSystem>
bool solve_stages(const MakeSystem& make_system, double tau, fem::NodalField& x,
                  const SolverConfig& config, Floors newton_floors, Floors picard_floors,
                  StepStats& local, std::vector<int>& history) {
  constexpr int kLevels = 8;
  const fem::NodalField start = x;
  const auto full = make_system(tau);
  if (newton_solve(full, x, config, newton_floors, true, local, history)) return true;
  if (newton_solve(full, x, config, newton_floors, false, local, history)) return true;

  fem::NodalField y = start;
  bool chain = true;
  for (int m = kLevels; m >= 1 && chain; --m) {
    StepStats scratch;
    const auto level = make_system(std::ldexp(tau, -m));
    chain = newton_solve(level, y, config, newton_floors, true, scratch, history) ||
            newton_solve(level, y, config, newton_floors, false, scratch, history);
    local.newton_iterations += scratch.newton_iterations;
    local.halvings += scratch.halvings;
  }
  if (chain) {
    fem::NodalField z = y;
    StepStats scratch = local;
    if (newton_solve(full, z, config, newton_floors, true, scratch, history) ||
        newton_solve(full, z, config, newton_floors, false, scratch, history)) {
      x = std::move(z);
      local = scratch;
      return true;
    }
    local.newton_iterations = scratch.newton_iterations;
    local.halvings = scratch.halvings;
    if (scratch.residual < local.residual) x = std::move(z);
  }
  return picard_solve(full, x, config, picard_floors, local);
}

}  // namespace

fem::NodalField step(std::span<const double> previous, double t_next, double tau,
                     const monotone::NonlinearityPair& pair, const ProblemSpec& spec,
                     const fem::Mesh1D& mesh, const SolverConfig& config, StepStats* stats) {
  config.validate();
  const std::size_t n = mesh.n_nodes();
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = spec.source(mesh.x(i), t_next);

  fem::NodalField guess(previous.begin(), previous.end());
  for (std::size_t i = 1; i + 1 < n; ++i) guess[i] += config.initial_guess_shift;
  guess.front() = 0.0;
  guess.back() = 0.0;

  StepStats local;
  std::vector<int> history;
  fem::NodalField u;
  bool converged = false;
  if (pair.piecewise_linear()) {
    // Chart variable s = beta + zeta: the chart slopes sum to one, so the
    // Jacobian stays uniformly invertible and plateaux of either graph cost
    // nothing.
    const SumChart chart(pair);
    std::vector<double> s_prev(n);
    for (std::size_t i = 0; i < n; ++i) s_prev[i] = chart.sigma(previous[i]);
    const auto make_system = [&](double t) {
      return StepSystem(mesh, chart, spec.flux, s_prev, f, t);
    };
    fem::NodalField s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = chart.sigma(guess[i]);
    converged = solve_stages(make_system, tau, s, config, {}, {1e-3, 1e-3}, local, history);
    u.resize(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = chart.recover(s[i], guess[i]);
    u.front() = 0.0;
    u.back() = 0.0;
  } else {
    const auto make_system = [&](double t) {
      return StepSystem(mesh, pair, spec.flux, previous, f, t);
    };
    // Floors keep columns of a common plateau invertible without delta.
    const bool floored = config.delta_reg == 0.0 && config.jacobian_floor > 0.0;
    const Floors newton_floors{floored ? config.jacobian_floor * pair.lipschitz_beta() : 0.0,
                               floored ? config.jacobian_floor * pair.lipschitz_zeta() : 0.0};
    const Floors picard_floors{1e-3 * pair.lipschitz_beta(), 1e-3 * pair.lipschitz_zeta()};
    u = guess;
    converged = solve_stages(make_system, tau, u, config, newton_floors, picard_floors, local,
                             history);
  }

  if (stats) *stats = local;
  if (!converged) {
    std::ostringstream os;
    os << "Newton did not converge: residual " << local.residual << " after "
       << local.newton_iterations << " Newton and " << local.picard_iterations
       << " Picard iterations";
    throw NewtonDivergence(os.str(), local.residual, std::move(history));
  }
  return u;
}

fem::NodalField step(std::span<const double> previous, double t_next, double tau,
                     const ProblemSpec& spec, const fem::Mesh1D& mesh,
                     const SolverConfig& config, StepStats* stats) {
  const auto pair = spec.pair.regularized(config.delta_reg);
  return step(previous, t_next, tau, pair, spec, mesh, config, stats);
}

fem::NodalField initial_slice(const ProblemSpec& spec, const fem::Mesh1D& mesh) {
  fem::NodalField u(mesh.n_nodes());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = spec.initial(mesh.x(i));
  u.front() = 0.0;
  u.back() = 0.0;
  return u;
}

double effective_delta(const ProblemSpec& spec, const fem::Mesh1D& mesh,
                       const SolverConfig& config) {
  if (config.delta_reg > 0.0 || !config.auto_delta) return config.delta_reg;
  const auto u0 = initial_slice(spec, mesh);
  const auto [lo, hi] = std::minmax_element(u0.begin(), u0.end());
  const double a = std::min(*lo, 0.0);
  const double b = std::max(*hi, 0.0);
  if (b > a && spec.pair.nu_degenerate_on(a, b)) return SolverConfig::kAutoDelta;
  return 0.0;
}

DiscreteSolution solve(const ProblemSpec& spec, const fem::Mesh1D& mesh, const TimeGrid& grid,
                       const SolverConfig& config) {
  config.validate();
  if (std::abs(grid.horizon() - spec.horizon) > 1e-12 * spec.horizon) {
    throw InvalidArgument("time grid does not end at the problem horizon");
  }
  const double delta = effective_delta(spec, mesh, config);
  SolverConfig cfg = config;
  cfg.delta_reg = delta;
  DiscreteSolution sol{mesh, grid, spec.pair.regularized(delta), delta, {}, {}, {}, {}, {}};
  sol.u.reserve(grid.steps() + 1);
  sol.u.push_back(initial_slice(spec, mesh));
  for (std::size_t k = 0; k < grid.steps(); ++k) {
    StepStats stats;
    try {
      sol.u.push_back(step(sol.u.back(), grid.t(k + 1), grid.tau(k), sol.pair, spec, mesh, cfg,
                           &stats));
    } catch (const NewtonDivergence& e) {
      throw NewtonDivergence("step " + std::to_string(k) + ": " + e.what(), e.last_residual(),
                             e.damping_history(), static_cast<long>(k));
    }
    sol.stats.push_back(stats);
  }
  sol.refresh_derived();
  return sol;
}

}  // namespace dnstab::solver
