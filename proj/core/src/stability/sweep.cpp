#include "dnstab/stability/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "dnstab/errors.hpp"
#include "dnstab/metrics/distances.hpp"
#include "dnstab/solver/energy.hpp"
#include "dnstab/solver/step.hpp"

namespace dnstab::stability {

bool SweepReport::trends_passed() const {
  return std::all_of(trends.begin(), trends.end(), [](const TrendFlag& t) { return t.passed; });
}

bool SweepReport::any_failed() const {
  return std::any_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.failed; });
}

TrendFlag trend_flag(const std::string& metric, const std::vector<double>& values,
                     double newton_tol) {
  TrendFlag flag;
  flag.metric = metric;
  if (values.empty()) return flag;
  flag.first = values.front();
  flag.last = values.back();
  const double noise = 10.0 * newton_tol;
  const bool indistinguishable =
      std::all_of(values.begin(), values.end(), [noise](double v) { return v <= noise; });
  flag.passed = indistinguishable || flag.last <= 0.5 * flag.first;
  return flag;
}

namespace {

SweepRow measure(const FamilyMember& member, const fem::Mesh1D& mesh,
                 const solver::TimeGrid& grid, const solver::SolverConfig& config,
                 const solver::DiscreteSolution& reference,
                 const metrics::SineFamily& tests) {
  SweepRow row;
  row.n = member.n;
  try {
    const auto sol = solver::solve(member.spec, mesh, grid, config);
    const auto nu = metrics::align(sol, reference, solver::Field::kNu);
    row.sup_l2_nu = metrics::sup_time_l2(nu.mesh, nu.a, nu.b);
    const auto beta = metrics::align(sol, reference, solver::Field::kBeta);
    row.weak_unif_beta = metrics::weak_uniform_metric(beta.mesh, beta.a, beta.b, tests);
    const auto zeta = metrics::align(sol, reference, solver::Field::kZeta);
    row.w1p_gap_zeta =
        metrics::lp_w1p_gap(zeta.mesh, grid, zeta.a, zeta.b, member.spec.flux.p());
    const auto audit = solver::energy_audit(sol, member.spec);
    row.energy_slack = std::min(audit.min_step_slack, audit.global_slack);
    row.newton_iters_mean = sol.mean_newton_iterations();
  } catch (const std::exception& e) {
    row.failed = true;
    row.error = e.what();
  }
  return row;
}

}  // namespace

SweepReport run_sweep(const PerturbationFamily& family, const fem::Mesh1D& mesh,
                      const solver::TimeGrid& grid, const solver::SolverConfig& config,
                      const solver::DiscreteSolution& reference, const SweepOptions& options) {
  config.validate();
  if (!(reference.grid == grid)) {
    throw GridMismatch("sweep reference must share the member time grid");
  }
  SweepReport report;
  report.base_name = family.base.name;
  report.kind = family.kind;
  report.uniformity = check_hypothesis_uniformity(family);
  report.rows.resize(family.members.size());

  const metrics::SineFamily tests(options.test_functions);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < family.members.size(); i = next++) {
      report.rows[i] = measure(family.members[i], mesh, grid, config, reference, tests);
    }
  };
  const std::size_t jobs = std::clamp<std::size_t>(options.jobs, 1, family.members.size());
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::vector<double> nu, beta, zeta;
  bool complete = true;
  for (const auto& row : report.rows) {
    if (row.failed) {
      complete = false;
      continue;
    }
    nu.push_back(row.sup_l2_nu);
    beta.push_back(row.weak_unif_beta);
    zeta.push_back(row.w1p_gap_zeta);
  }
  report.trends.push_back(trend_flag("sup_l2_nu", nu, config.newton_tol));
  report.trends.push_back(trend_flag("weak_unif_beta", beta, config.newton_tol));
  report.trends.push_back(trend_flag("w1p_gap_zeta", zeta, config.newton_tol));
  if (!complete) {
    for (auto& t : report.trends) t.passed = false;
  }
  return report;
}

}  // namespace dnstab::stability
