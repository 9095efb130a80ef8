#include "dnstab/solver/problem.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "dnstab/errors.hpp"

namespace dnstab::solver {

ProblemSpec::ProblemSpec(monotone::NonlinearityPair pair_in, fem::FluxLaw flux_in,
                         SpaceTimeFunction source_in, SpaceFunction initial_in,
                         double horizon_in, std::string name_in, bool zero_source)
    : pair(std::move(pair_in)),
      flux(std::move(flux_in)),
      source(std::move(source_in)),
      initial(std::move(initial_in)),
      horizon(horizon_in),
      name(std::move(name_in)),
      zero_source_(zero_source) {
  if (!source) {
    source = [](double, double) { return 0.0; };
    zero_source_ = true;
  }
  validate();
}

void ProblemSpec::validate() const {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw InvalidArgument("horizon T must be positive and finite");
  }
  if (!initial) throw InvalidArgument("problem needs an initial datum");
  constexpr int kSamples = 101;
  for (int i = 0; i < kSamples; ++i) {
    const double x = static_cast<double>(i) / (kSamples - 1);
    if (!std::isfinite(initial(x))) {
      throw InvalidArgument("initial datum is not finite at x = " + std::to_string(x));
    }
    for (double t : {0.0, 0.5 * horizon, horizon}) {
      if (!std::isfinite(source(x, t))) {
        throw InvalidArgument("source is not finite at (" + std::to_string(x) + ", " +
                              std::to_string(t) + ")");
      }
    }
  }
}

TimeGrid::TimeGrid(std::vector<double> times) : times_(std::move(times)) {
  if (times_.size() < 2) throw InvalidArgument("time grid needs at least one step");
  if (times_.front() != 0.0) throw InvalidArgument("time grid must start at 0");
  for (std::size_t k = 1; k < times_.size(); ++k) {
    if (!(times_[k] > times_[k - 1])) throw InvalidArgument("time grid must increase strictly");
  }
}

TimeGrid TimeGrid::uniform(double horizon, std::size_t steps) {
  if (steps == 0) throw InvalidArgument("time grid needs at least one step");
  if (!(horizon > 0.0)) throw InvalidArgument("horizon T must be positive");
  std::vector<double> t(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    t[k] = horizon * static_cast<double>(k) / static_cast<double>(steps);
  }
  t.back() = horizon;
  return TimeGrid(std::move(t));
}

TimeGrid TimeGrid::with_step(double horizon, double tau) {
  if (!(tau > 0.0)) throw InvalidArgument("time step must be positive");
  const double k = std::max(1.0, std::round(horizon / tau));
  return uniform(horizon, static_cast<std::size_t>(k));
}

void SolverConfig::validate() const {
  if (delta_reg < 0.0) throw InvalidArgument("delta_reg must be nonnegative");
  if (!(newton_tol > 0.0)) throw InvalidArgument("newton_tol must be positive");
  if (max_newton < 1) throw InvalidArgument("max_newton must be at least 1");
  if (!(damping > 0.0 && damping < 1.0)) throw InvalidArgument("damping must lie in (0, 1)");
  if (max_halvings < 0) throw InvalidArgument("max_halvings must be nonnegative");
  if (picard_iterations < 0) throw InvalidArgument("picard_iterations must be nonnegative");
  if (jacobian_floor < 0.0) throw InvalidArgument("jacobian_floor must be nonnegative");
}

double DiscreteSolution::mean_newton_iterations() const {
  if (stats.empty()) return 0.0;
  double total = 0.0;
  for (const auto& s : stats) total += s.newton_iterations;
  return total / static_cast<double>(stats.size());
}

int DiscreteSolution::total_picard_iterations() const {
  int total = 0;
  for (const auto& s : stats) total += s.picard_iterations;
  return total;
}

void DiscreteSolution::refresh_derived() {
  const auto n = u.size();
  beta.assign(n, {});
  zeta.assign(n, {});
  nu.assign(n, {});
  for (std::size_t k = 0; k < n; ++k) {
    const auto& slice = u[k];
    beta[k].resize(slice.size());
    zeta[k].resize(slice.size());
    nu[k].resize(slice.size());
    for (std::size_t i = 0; i < slice.size(); ++i) {
      beta[k][i] = pair.beta()(slice[i]);
      zeta[k][i] = pair.zeta()(slice[i]);
      nu[k][i] = pair.nu(slice[i]);
    }
  }
}

const char* to_string(Field f) noexcept {
  switch (f) {
    case Field::kU: return "u";
    case Field::kBeta: return "beta";
    case Field::kZeta: return "zeta";
    case Field::kNu: return "nu";
  }
  return "?";
}

const std::vector<fem::NodalField>& trajectory(const DiscreteSolution& sol, Field f) {
  switch (f) {
    case Field::kU: return sol.u;
    case Field::kBeta: return sol.beta;
    case Field::kZeta: return sol.zeta;
    case Field::kNu: return sol.nu;
  }
  return sol.u;
}

}  // namespace dnstab::solver
