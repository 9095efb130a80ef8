#include "dnstab/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "dnstab/cli/manifest.hpp"
#include "dnstab/dual/dual.hpp"
#include "dnstab/errors.hpp"
#include "dnstab/fem/flux_law.hpp"
#include "dnstab/monotone/hypotheses.hpp"
#include "dnstab/monotone/monotone_graph.hpp"
#include "dnstab/monotone/presets.hpp"
#include "dnstab/solver/dump.hpp"
#include "dnstab/solver/energy.hpp"
#include "dnstab/solver/manufactured.hpp"
#include "dnstab/solver/step.hpp"
#include "dnstab/stability/sweep.hpp"

namespace dnstab::cli {

namespace {

std::ostream& log_of(const RunContext& ctx) { return ctx.log ? *ctx.log : std::cout; }
std::ostream& err_of(const RunContext& ctx) { return ctx.err ? *ctx.err : std::cerr; }

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const Manifest& manifest,
            const std::vector<std::string>& columns)
      : path_(path), out_(path) {
    if (!out_) throw InvalidArgument("cannot write " + path.string());
    for (const auto& line : manifest.header_lines()) out_ << "# " << line << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
    out_ << '\n';
    out_ << std::setprecision(17);
  }

  template <class... Ts>
  void row(const Ts&... values) {
    bool first = true;
    ((out_ << (first ? "" : ",") << values, first = false), ...);
    out_ << '\n';
  }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

std::filesystem::path prepare(const RunContext& ctx, const Manifest& manifest) {
  std::filesystem::create_directories(ctx.out_dir);
  write_manifest(ctx.out_dir, manifest);
  return ctx.out_dir;
}

}  // namespace

int run_solve(const RunContext& ctx) {
  const auto& cfg = ctx.config;
  const auto spec = cfg.build_problem();
  const auto mesh = fem::build_mesh(cfg.cells);
  const auto grid = solver::TimeGrid::with_step(spec.horizon, cfg.tau);
  const double delta = solver::effective_delta(spec, mesh, cfg.solver);
  const auto manifest = build_manifest(
      cfg, "solve", {{"problem", spec.name}, {"steps", grid.steps()}, {"delta", delta}});
  const auto dir = prepare(ctx, manifest);

  const auto sol = solver::solve(spec, mesh, grid, cfg.solver);
  solver::write_all_trajectories(dir, "solution", sol, manifest.header_lines());

  const auto audit = solver::energy_audit(sol, spec);
  const auto apriori = solver::check_apriori(sol, spec);
  CsvWriter csv(dir / "energy.csv", manifest, {"k", "t", "energy", "step_slack"});
  for (std::size_t k = 0; k < audit.energy.size(); ++k) {
    const double slack = k == 0 ? 0.0 : audit.step_slack[k - 1];
    csv.row(k, grid.t(k), audit.energy[k], slack);
  }

  auto& log = log_of(ctx);
  log << std::setprecision(6) << "solve " << spec.name << ": " << grid.steps() << " steps, "
      << mesh.n_cells() << " cells, delta " << delta << ", mean Newton iterations "
      << sol.mean_newton_iterations() << '\n'
      << "  min step slack " << audit.min_step_slack << " (tolerance " << audit.tolerance
      << ")\n"
      << "  global slack " << audit.global_slack << '\n'
      << "  a-priori energy " << apriori.observed_energy << " <= "
      << apriori.factor * apriori.bounds.energy_bound << ", gradient "
      << apriori.observed_gradient << " <= " << apriori.factor * apriori.bounds.gradient_bound
      << (apriori.passed ? "" : "  VIOLATED") << '\n';
  const bool ok = audit.steps_ok() && audit.global_ok() && apriori.passed;
  if (!ok) err_of(ctx) << "energy audit failed\n";
  return ok ? kExitOk : kExitAssertion;
}

int run_sweep(const RunContext& ctx) {
  const auto& cfg = ctx.config;
  const auto spec = cfg.build_problem();
  const auto family = stability::make_family(spec, cfg.sweep.kind, cfg.sweep.indices);
  const auto mesh = fem::build_mesh(cfg.cells);
  const auto grid = solver::TimeGrid::with_step(spec.horizon, cfg.tau);
  const auto manifest = build_manifest(cfg, "sweep",
                                       {{"problem", spec.name},
                                        {"family", stability::to_string(cfg.sweep.kind)},
                                        {"indices", cfg.sweep.indices},
                                        {"steps", grid.steps()}});
  const auto dir = prepare(ctx, manifest);
  auto& log = log_of(ctx);

  const auto uniformity = stability::check_hypothesis_uniformity(family);
  if (!uniformity.passed) {
    err_of(ctx) << uniformity.message() << '\n';
    return kExitAssertion;
  }

  const auto reference = solver::solve(spec, mesh, grid, cfg.solver);
  stability::SweepOptions options;
  options.jobs = ctx.jobs;
  const auto report = stability::run_sweep(family, mesh, grid, cfg.solver, reference, options);

  CsvWriter csv(dir / "sweep.csv", manifest,
                {"n", "sup_l2_nu", "weak_unif_beta", "w1p_gap_zeta", "energy_slack",
                 "newton_iters_mean"});
  for (const auto& r : report.rows) {
    if (r.failed) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      csv.row(r.n, nan, nan, nan, nan, nan);
      err_of(ctx) << "member n=" << r.n << " failed: " << r.error << '\n';
    } else {
      csv.row(r.n, r.sup_l2_nu, r.weak_unif_beta, r.w1p_gap_zeta, r.energy_slack,
              r.newton_iters_mean);
    }
  }
  log << std::setprecision(6) << "sweep " << spec.name << " / "
      << stability::to_string(family.kind) << ": " << report.rows.size() << " members\n";
  for (const auto& t : report.trends) {
    log << "  trend " << t.metric << ": " << t.first << " -> " << t.last
        << (t.passed ? "" : "  FLAGGED (no clear decrease)") << '\n';
  }
  return report.any_failed() ? kExitSolver : kExitOk;
}

int run_verify_toolkit(const RunContext& ctx) {
  const auto& cfg = ctx.config;
  const auto manifest = build_manifest(
      cfg, "verify-toolkit", {{"samples", cfg.verify.samples}, {"range", cfg.verify.range}});
  const auto dir = prepare(ctx, manifest);
  auto& log = log_of(ctx);

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> draw(-cfg.verify.range, cfg.verify.range);
  CsvWriter csv(dir / "verify.csv", manifest, {"subject", "check", "samples", "worst", "passed"});
  bool all_ok = true;
  auto record = [&](const std::string& subject, const std::string& check, std::size_t n,
                    double worst, bool ok) {
    csv.row(subject, check, n, worst, ok ? 1 : 0);
    log << std::setprecision(6) << (ok ? "  ok    " : "  FAIL  ") << subject << ' ' << check
        << " worst " << worst << '\n';
    all_ok = all_ok && ok;
  };

  for (const auto& name : monotone::presets::pair_names()) {
    const auto pair = monotone::presets::pair_by_name(name);
    const auto k = monotone::fit_growth_constants(pair);
    double worst_b = 0.0;
    double worst_ineq = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cfg.verify.samples; ++i) {
      const double a = draw(rng);
      const double b = draw(rng);
      const double direct = pair.B(pair.beta()(a));
      const double via_s = pair.B_of_beta(a);
      worst_b = std::max(worst_b, std::abs(direct - via_s) / (1.0 + std::abs(via_s)));
      const double scale = 1.0 + a * a + b * b;
      worst_ineq = std::min(worst_ineq, monotone::inequality_slacks(pair, k, a, b).min() / scale);
    }
    record(name, "B-consistency", cfg.verify.samples, worst_b, worst_b <= 1e-10);
    record(name, "inequalities", cfg.verify.samples, worst_ineq, worst_ineq >= -1e-10);
  }

  for (const auto& graph : monotone::presets::graphs::all()) {
    const auto pair = monotone::resolvent_decompose(graph);
    const double d = monotone::hausdorff_distance(graph, monotone::recompose_graph(pair));
    double worst_slope = 0.0;
    for (double s : pair.knots()) {
      for (double x : {s - 1e-3, s + 1e-3}) {
        for (double slope : {pair.beta().derivative(x), pair.zeta().derivative(x)}) {
          worst_slope = std::max({worst_slope, -slope, slope - 1.0});
        }
      }
    }
    record(graph.name(), "round-trip", 1, d, d < 1e-12);
    record(graph.name(), "resolvent-slopes", pair.knots().size(), worst_slope,
           worst_slope <= 1e-12);
  }

  const auto samples = fem::random_flux_samples(cfg.seed, cfg.verify.samples, cfg.verify.range);
  for (const auto& flux : {fem::FluxLaw::linear(), fem::FluxLaw::mobility(),
                           fem::FluxLaw::p_laplace(1.5), fem::FluxLaw::p_laplace(3.0)}) {
    const std::string name = std::string(fem::to_string(flux.kind())) + "-p" +
                             std::to_string(flux.p()).substr(0, 3);
    const auto mono = fem::flux_monotonicity_probe(flux, samples);
    const auto coer = fem::flux_coercivity_probe(flux, samples);
    const auto growth = fem::flux_growth_probe(flux, samples);
    record(name, "monotonicity", samples.size(), mono.min_value, mono.passed);
    record(name, "coercivity", samples.size(), coer.min_value, coer.passed);
    record(name, "growth", samples.size(), growth.min_value, growth.passed);
  }
  return all_ok ? kExitOk : kExitAssertion;
}

int run_dual_check(const RunContext& ctx) {
  const auto& cfg = ctx.config;
  const auto spec = cfg.build_problem();
  if (!spec.flux.is_linear()) {
    throw InvalidArgument("dual-check needs a linear flux");
  }
  const auto mesh = fem::build_mesh(cfg.cells);
  const auto grid = solver::TimeGrid::with_step(spec.horizon, cfg.tau);
  // With a common plateau the regularization would pick one solution.
  const bool plateau = solver::has_common_plateau(spec.pair);
  solver::SolverConfig c1 = cfg.solver;
  if (plateau) c1.auto_delta = false;
  solver::SolverConfig c2 = c1;
  c1.initial_guess_shift = cfg.dual.guess_shifts[0];
  c2.initial_guess_shift = cfg.dual.guess_shifts[1];

  const auto manifest = build_manifest(cfg, "dual-check",
                                       {{"problem", spec.name},
                                        {"eps", cfg.dual.eps},
                                        {"guess_shifts", cfg.dual.guess_shifts},
                                        {"common_plateau", plateau},
                                        {"auto_delta", c1.auto_delta}});
  const auto dir = prepare(ctx, manifest);

  const auto sol1 = solver::solve(spec, mesh, grid, c1);
  const auto sol2 = solver::solve(spec, mesh, grid, c2);
  double spread = 0.0;
  for (std::size_t i = 0; i < mesh.n_nodes(); ++i) {
    spread = std::max(spread, std::abs(sol1.u.back()[i] - sol2.u.back()[i]));
  }
  const auto rows = dual::uniqueness_witness(sol1, sol2, spec.flux, dual::sine_bump(spec.horizon),
                                             cfg.dual.eps, ctx.jobs);

  CsvWriter csv(dir / "dual.csv", manifest, {"eps", "witness", "bound", "energy_lhs", "energy_rhs"});
  auto& log = log_of(ctx);
  log << std::setprecision(6) << "dual-check " << spec.name << ": max |u1 - u2| at T " << spread
      << '\n';
  bool ok = true;
  for (const auto& r : rows) {
    csv.row(r.eps, r.witness, r.bound, r.energy_lhs, r.energy_rhs);
    const bool row_ok = r.witness <= r.bound * (1.0 + 1e-9) && r.energy_lhs <= r.energy_rhs;
    log << "  eps " << r.eps << ": witness " << r.witness << " bound " << r.bound
        << " energy " << r.energy_lhs << " <= " << r.energy_rhs << (row_ok ? "" : "  FAIL")
        << '\n';
    ok = ok && row_ok;
  }
  return ok ? kExitOk : kExitAssertion;
}

int run_convergence(const RunContext& ctx) {
  const auto& cfg = ctx.config;
  const auto& p = cfg.problem;
  if (p.preset != "heat" || p.pair_preset || p.beta || p.flux || p.initial || p.source) {
    throw InvalidArgument("convergence runs on the unmodified heat preset only");
  }
  const auto spec = cfg.build_problem();
  const auto& cells = cfg.convergence.cells;
  const auto manifest = build_manifest(cfg, "convergence",
                                       {{"cells", cells},
                                        {"tau_factor", cfg.convergence.tau_factor},
                                        {"min_order", cfg.convergence.min_order}});
  const auto dir = prepare(ctx, manifest);

  CsvWriter csv(dir / "convergence.csv", manifest, {"cells", "h", "tau", "error", "order"});
  auto& log = log_of(ctx);
  double prev_error = 0.0;
  double prev_h = 0.0;
  double worst_order = std::numeric_limits<double>::infinity();
  for (std::size_t n : cells) {
    const auto mesh = fem::build_mesh(n);
    const double h = 1.0 / static_cast<double>(n);
    const auto grid = solver::TimeGrid::with_step(spec.horizon, cfg.convergence.tau_factor * h * h);
    const auto sol = solver::solve(spec, mesh, grid, cfg.solver);
    const double error =
        solver::manufactured_error(sol, solver::heat_exact, solver::Field::kU).sup_time_l2;
    double order = std::numeric_limits<double>::quiet_NaN();
    if (prev_h > 0.0) {
      order = std::log(prev_error / error) / std::log(prev_h / h);
      worst_order = std::min(worst_order, order);
    }
    csv.row(n, h, grid.tau(0), error, order);
    log << std::setprecision(6) << "  cells " << n << ": error " << error << " order " << order
        << '\n';
    prev_error = error;
    prev_h = h;
  }
  const bool ok = worst_order >= cfg.convergence.min_order;
  log << "convergence: observed order " << worst_order << (ok ? " >= " : " < ")
      << cfg.convergence.min_order << '\n';
  return ok ? kExitOk : kExitAssertion;
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Degenerate nonlinear parabolic solver and stability toolkit", "dnstab"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 42;
  std::size_t jobs = 1;
  std::vector<std::pair<CLI::App*, int (*)(const RunContext&)>> commands;
  auto add = [&](const char* name, const char* help, int (*fn)(const RunContext&)) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "YAML experiment file")->required();
    sub->add_option("--out", out_dir, "Output directory (default: config output or dnstab-out)");
    sub->add_option("--seed", seed, "Seed for randomized checks")->default_val(42);
    sub->add_option("--jobs", jobs, "Worker threads")->default_val(1)->check(CLI::PositiveNumber);
    commands.emplace_back(sub, fn);
  };
  add("solve", "Solve one problem and audit its energy", run_solve);
  add("sweep", "Run a perturbation family against its base problem", run_sweep);
  add("verify-toolkit", "Randomized checks of the nonlinearity and flux presets",
      run_verify_toolkit);
  add("dual-check", "Dual-problem witness for two solutions of one problem", run_dual_check);
  add("convergence", "Spatial convergence order on the heat equation", run_convergence);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    RunContext ctx{parse_config(config_path), {}, jobs, &out, &err};
    bool seed_given = false;
    for (const auto& [sub, fn] : commands) {
      if (sub->parsed()) seed_given = sub->get_option("--seed")->count() > 0;
    }
    if (seed_given) ctx.config.seed = seed;
    ctx.out_dir = !out_dir.empty() ? std::filesystem::path(out_dir)
                                   : ctx.config.output.value_or("dnstab-out");
    for (const auto& [sub, fn] : commands) {
      if (sub->parsed()) return fn(ctx);
    }
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "configuration error in " << config_path << ":\n" << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NewtonDivergence& e) {
    err << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  } catch (const QuadratureError& e) {
    err << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  } catch (const Error& e) {
    err << "check failed: " << e.what() << '\n';
    return kExitAssertion;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitSolver;
  }
}

}  // namespace dnstab::cli
