#include "dnstab/dual/dual.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "dnstab/errors.hpp"
#include "dnstab/fem/assembly.hpp"
#include "dnstab/solver/tridiagonal.hpp"

namespace dnstab::dual {

namespace {

void require_uniform(const solver::TimeGrid& grid) {
  const double tau = grid.tau(0);
  for (std::size_t k = 1; k < grid.steps(); ++k) {
    if (std::abs(grid.tau(k) - tau) > 1e-12 * tau) {
      throw InvalidArgument("dual solve needs a uniform time grid");
    }
  }
}

/// -(A psi)_i / m_i at interior nodes, 0 on the boundary.
fem::NodalField weak_divergence(const fem::StiffnessBands& a, std::span<const double> m,
                                std::span<const double> psi) {
  const std::size_t n = psi.size();
  fem::NodalField div(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double ap = a.lower[i - 1] * psi[i - 1] + a.diag[i] * psi[i] + a.upper[i] * psi[i + 1];
    div[i] = -ap / m[i];
  }
  return div;
}

}  // namespace

UdQ compute_ud_q(const solver::DiscreteSolution& sol1, const solver::DiscreteSolution& sol2) {
  if (!(sol1.mesh == sol2.mesh)) throw GridMismatch("solutions live on different meshes");
  if (!(sol1.grid == sol2.grid)) throw GridMismatch("solutions live on different time grids");
  UdQ out;
  const std::size_t slices = sol1.u.size();
  out.ud.resize(slices);
  out.q.resize(slices);
  for (std::size_t k = 0; k < slices; ++k) {
    const std::size_t n = sol1.u[k].size();
    out.ud[k].assign(n, 0.0);
    out.q[k].assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double dz = sol1.zeta[k][i] - sol2.zeta[k][i];
      const double ud = sol1.beta[k][i] + sol1.zeta[k][i] - sol2.beta[k][i] - sol2.zeta[k][i];
      out.ud[k][i] = ud;
      if (std::abs(ud) <= UdQ::kThreshold) continue;
      const double q = dz / ud;
      if (q < -1e-9 || q > 1.0 + 1e-9) {
        std::ostringstream os;
        os << "q = " << q << " outside [0, 1] at level " << k << ", node " << i;
        throw InvariantViolation(os.str());
      }
      out.q[k][i] = std::clamp(q, 0.0, 1.0);
    }
  }
  return out;
}

double regularize_q(double q, double eps) {
  if (!(eps > 0.0 && eps < 0.5)) throw InvalidArgument("eps must lie in (0, 1/2)");
  if (!(q >= 0.0 && q <= 1.0)) throw InvalidArgument("q must lie in [0, 1]");
  return (1.0 - 2.0 * eps) * q + eps;
}

QRatios q_ratios(double q, double eps) {
  const double qe = regularize_q(q, eps);
  const double d2 = (qe - q) * (qe - q);
  return {d2 / qe, d2 / (1.0 - qe)};
}

Slices regularize_q(const Slices& q, double eps) {
  Slices out(q.size());
  for (std::size_t k = 0; k < q.size(); ++k) {
    out[k].resize(q[k].size());
    for (std::size_t i = 0; i < q[k].size(); ++i) {
      out[k][i] = regularize_q(q[k][i], eps);
      const QRatios r = q_ratios(q[k][i], eps);
      if (r.below > eps * (1.0 + 1e-12) || r.above > eps * (1.0 + 1e-12)) {
        throw InvariantViolation("regularized coefficient breaks its distance bound");
      }
    }
  }
  return out;
}

void DualProblemSpec::validate(const fem::Mesh1D& mesh, const solver::TimeGrid& grid) const {
  if (!(g_min > 0.0 && g_min < 0.5)) throw InvalidArgument("g_min must lie in (0, 1/2)");
  if (!flux.is_linear()) throw InvalidArgument("dual problem needs a linear flux");
  if (!w) throw InvalidArgument("dual problem needs a right-hand side w");
  if (g.size() != grid.steps() + 1) {
    throw GridMismatch("coefficient g needs one slice per time level");
  }
  const double slack = 1e-12;
  for (const auto& slice : g) {
    fem::require_nodal(mesh, slice, "coefficient g");
    for (double v : slice) {
      if (!(v >= g_min - slack && v <= 1.0 - g_min + slack)) {
        std::ostringstream os;
        os << "coefficient g = " << v << " outside [" << g_min << ", " << 1.0 - g_min << "]";
        throw InvalidArgument(os.str());
      }
    }
  }
}

Slices sample(const fem::Mesh1D& mesh, const solver::TimeGrid& grid,
              const solver::SpaceTimeFunction& g) {
  Slices out(grid.steps() + 1, fem::NodalField(mesh.n_nodes()));
  for (std::size_t k = 0; k <= grid.steps(); ++k) {
    for (std::size_t i = 0; i < mesh.n_nodes(); ++i) out[k][i] = g(mesh.x(i), grid.t(k));
  }
  return out;
}

solver::SpaceTimeFunction sine_bump(double horizon) {
  if (!(horizon > 0.0)) throw InvalidArgument("horizon must be positive");
  return [horizon](double x, double t) {
    const double sx = std::sin(std::numbers::pi * x);
    const double st = std::sin(std::numbers::pi * t / horizon);
    return sx * sx * st * st;
  };
}

DualSolution solve_dual_backward(const DualProblemSpec& spec, const fem::Mesh1D& mesh,
                                 const solver::TimeGrid& grid) {
  spec.validate(mesh, grid);
  require_uniform(grid);
  const std::size_t n = mesh.n_nodes();
  const std::size_t levels = grid.steps();
  const auto m = fem::lumped_mass(mesh);
  const auto a = fem::linear_stiffness(mesh, spec.flux);

  DualSolution sol{mesh, grid, Slices(levels + 1, fem::NodalField(n, 0.0)), {}};
  sol.residuals.assign(levels, 0.0);
  for (std::size_t k = levels; k-- > 0;) {
    const double tau = grid.tau(k);
    const auto& g = spec.g[k];
    const auto& next = sol.psi[k + 1];
    solver::Tridiagonal sys(n);
    std::vector<double> rhs(n, 0.0);
    sys.diag[0] = 1.0;
    sys.diag[n - 1] = 1.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double md = (1.0 - g[i]) * m[i] / tau;
      sys.diag[i] = md + g[i] * a.diag[i];
      sys.lower[i - 1] = g[i] * a.lower[i - 1];
      sys.upper[i] = g[i] * a.upper[i];
      rhs[i] = md * next[i] - m[i] * spec.w(mesh.x(i), grid.t(k));
    }
    auto psi = solver::solve_tridiagonal(sys, rhs);
    const auto applied = sys.apply(psi);
    double res = 0.0;
    double scale = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      res = std::max(res, std::abs(applied[i] - rhs[i]));
      scale = std::max(scale, std::abs(rhs[i]));
    }
    sol.residuals[k] = res / scale;
    if (sol.residuals[k] > 1e-10) {
      std::ostringstream os;
      os << "dual step " << k << " residual " << sol.residuals[k] << " exceeds 1e-10";
      throw InvariantViolation(os.str());
    }
    sol.psi[k] = std::move(psi);
  }
  return sol;
}

double energy_constant(double lambda_lower, double lambda_upper, double horizon) {
  if (!(lambda_lower > 0.0 && lambda_upper >= lambda_lower && horizon > 0.0)) {
    throw InvalidArgument("energy constant needs 0 < lambda_lower <= lambda_upper, T > 0");
  }
  constexpr double kDiam = 1.0;
  const double lu = lambda_upper;
  const double t = horizon;
  return (2.0 / lambda_lower) * std::sqrt(lu * lu + kDiam * kDiam) *
         std::sqrt(t * t * lu * lu + kDiam * kDiam + kDiam * kDiam * t * t);
}

DualEnergy dual_energy_check(const DualSolution& psi, const DualProblemSpec& spec) {
  const auto& mesh = psi.mesh;
  const auto& grid = psi.grid;
  spec.validate(mesh, grid);
  const auto m = fem::lumped_mass(mesh);
  const auto a = fem::linear_stiffness(mesh, spec.flux);
  const std::size_t n = mesh.n_nodes();

  DualEnergy e;
  e.C0 = energy_constant(spec.flux.lambda_lower(), spec.flux.lambda_upper(), grid.horizon());
  fem::NodalField w_now(n), w_next(n);
  for (std::size_t k = 0; k < grid.steps(); ++k) {
    const double tau = grid.tau(k);
    const auto div = weak_divergence(a, m, psi.psi[k]);
    for (std::size_t i = 0; i < n; ++i) {
      const double dt = (psi.psi[k + 1][i] - psi.psi[k][i]) / tau;
      const double g = spec.g[k][i];
      e.lhs += tau * m[i] * ((1.0 - g) * dt * dt + g * div[i] * div[i]);
      w_now[i] = spec.w(mesh.x(i), grid.t(k));
      w_next[i] = spec.w(mesh.x(i), grid.t(k + 1));
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double dw = (w_next[i] - w_now[i]) / tau;
      e.w_sq += tau * m[i] * w_now[i] * w_now[i];
      e.dt_w_sq += tau * m[i] * dw * dw;
    }
    for (std::size_t c = 0; c < mesh.n_cells(); ++c) {
      const double gx = (w_now[c + 1] - w_now[c]) / mesh.h(c);
      e.grad_w_sq += tau * mesh.h(c) * gx * gx;
    }
  }
  e.rhs = e.C0 * (e.grad_w_sq + e.w_sq + e.dt_w_sq);
  return e;
}

std::vector<WitnessRow> uniqueness_witness(const solver::DiscreteSolution& sol1,
                                           const solver::DiscreteSolution& sol2,
                                           const fem::FluxLaw& flux,
                                           const solver::SpaceTimeFunction& w,
                                           const std::vector<double>& eps_ladder,
                                           std::size_t jobs) {
  if (!flux.is_linear() || flux.p() != 2.0) {
    throw InvalidArgument("uniqueness witness needs a linear flux with p = 2");
  }
  const auto udq = compute_ud_q(sol1, sol2);
  const auto& mesh = sol1.mesh;
  const auto& grid = sol1.grid;
  require_uniform(grid);
  const auto m = fem::lumped_mass(mesh);

  double witness = 0.0;
  double ud_sq = 0.0;
  for (std::size_t k = 0; k < grid.steps(); ++k) {
    const double tau = grid.tau(k);
    for (std::size_t i = 0; i < mesh.n_nodes(); ++i) {
      witness += tau * m[i] * udq.ud[k][i] * w(mesh.x(i), grid.t(k));
      ud_sq += tau * m[i] * udq.ud[k][i] * udq.ud[k][i];
    }
  }
  witness = std::abs(witness);

  std::vector<WitnessRow> rows(eps_ladder.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < eps_ladder.size(); j = next++) {
      const double eps = eps_ladder[j];
      DualProblemSpec spec{regularize_q(udq.q, eps), flux, w, eps};
      const auto psi = solve_dual_backward(spec, mesh, grid);
      const auto energy = dual_energy_check(psi, spec);
      WitnessRow row;
      row.eps = eps;
      row.witness = witness;
      row.energy_lhs = energy.lhs;
      row.energy_rhs = energy.rhs;
      row.ud_norm = std::sqrt(ud_sq);
      row.bound = std::sqrt(2.0 * eps * energy.rhs * ud_sq);
      row.chain_bound = std::sqrt(2.0 * eps * energy.lhs * ud_sq);
      rows[j] = row;
    }
  };
  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(eps_ladder.size(), 1));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return rows;
}

}  // namespace dnstab::dual
