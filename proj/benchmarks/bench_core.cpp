#include <random>

#include <benchmark/benchmark.h>

#include "dnstab/dual/dual.hpp"
#include "dnstab/monotone/presets.hpp"
#include "dnstab/solver/problems.hpp"
#include "dnstab/solver/step.hpp"
#include "dnstab/stability/sweep.hpp"

using namespace dnstab;

static void BM_PotentialEvaluation(benchmark::State& state) {
  const auto pair = monotone::presets::stefan();
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> draw(-10.0, 10.0);
  std::vector<double> s(1024);
  for (auto& v : s) v = draw(rng);
  for (auto _ : state) {
    double acc = 0.0;
    for (double v : s) acc += pair.B(pair.beta()(v));
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(s.size()));
}
BENCHMARK(BM_PotentialEvaluation);

static void BM_SolveProblem(benchmark::State& state, const char* name) {
  const auto spec = solver::problems::problem_by_name(name);
  const auto mesh = fem::build_mesh(static_cast<std::size_t>(state.range(0)));
  const auto grid = solver::TimeGrid::uniform(spec.horizon, 100);
  for (auto _ : state) benchmark::DoNotOptimize(solver::solve(spec, mesh, grid));
  state.SetComplexityN(state.range(0));
}
BENCHMARK_CAPTURE(BM_SolveProblem, heat, "heat")->RangeMultiplier(2)->Range(32, 256)->Complexity();
BENCHMARK_CAPTURE(BM_SolveProblem, stefan, "stefan")->RangeMultiplier(2)->Range(32, 256)->Complexity();
BENCHMARK_CAPTURE(BM_SolveProblem, richards, "richards")->Arg(64);
BENCHMARK_CAPTURE(BM_SolveProblem, p_laplace_3, "p-laplace-3")->Arg(64);
BENCHMARK_CAPTURE(BM_SolveProblem, common_plateau, "common-plateau")->Arg(64);

static void BM_DualBackward(benchmark::State& state) {
  const auto mesh = fem::build_mesh(static_cast<std::size_t>(state.range(0)));
  const auto grid = solver::TimeGrid::uniform(0.1, 100);
  const dual::DualProblemSpec spec{dual::sample(mesh, grid, [](double, double) { return 0.5; }),
                                   fem::FluxLaw::linear(), dual::sine_bump(0.1), 0.25};
  for (auto _ : state) benchmark::DoNotOptimize(dual::solve_dual_backward(spec, mesh, grid));
}
BENCHMARK(BM_DualBackward)->Arg(64)->Arg(256);

static void BM_StefanDeltaSweep(benchmark::State& state) {
  const auto base = solver::problems::stefan();
  const auto mesh = fem::build_mesh(64);
  const auto grid = solver::TimeGrid::uniform(base.horizon, 100);
  const auto ref = solver::solve(base, mesh, grid);
  const auto family =
      stability::make_family(base, stability::FamilyKind::kDelta, {2, 4, 8, 16, 32});
  stability::SweepOptions opts;
  opts.jobs = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(stability::run_sweep(family, mesh, grid, {}, ref, opts));
}
BENCHMARK(BM_StefanDeltaSweep)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
