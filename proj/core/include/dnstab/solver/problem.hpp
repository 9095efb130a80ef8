#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dnstab/fem/flux_law.hpp"
#include "dnstab/fem/mesh.hpp"
#include "dnstab/monotone/nonlinearity_pair.hpp"

namespace dnstab::solver {

using SpaceFunction = std::function<double(double)>;
using SpaceTimeFunction = std::function<double(double, double)>;

/// d/dt beta(u) - (a(x, nu(u), zeta(u)_x))_x = f on (0, 1) x (0, T),
/// zeta(u) = 0 on the boundary, u(., 0) = u0.
struct ProblemSpec {
  monotone::NonlinearityPair pair;
  fem::FluxLaw flux;
  SpaceTimeFunction source;
  SpaceFunction initial;
  double horizon = 1.0;
  std::string name;

  /// Throws InvalidArgument when the horizon is not positive or f, u0 are not
  /// finite on a sample grid.
  void validate() const;
  bool zero_source() const noexcept { return zero_source_; }

  ProblemSpec(monotone::NonlinearityPair pair, fem::FluxLaw flux, SpaceTimeFunction source,
              SpaceFunction initial, double horizon, std::string name = {},
              bool zero_source = false);

 private:
  bool zero_source_ = false;
};

/// t_0 = 0 < t_1 < ... < t_K = T.
class TimeGrid {
 public:
  explicit TimeGrid(std::vector<double> times);
  static TimeGrid uniform(double horizon, std::size_t steps);
  /// Uniform grid with step as close to `tau` as divides T evenly.
  static TimeGrid with_step(double horizon, double tau);

  std::size_t steps() const noexcept { return times_.size() - 1; }
  double t(std::size_t k) const { return times_[k]; }
  double tau(std::size_t k) const { return times_[k + 1] - times_[k]; }
  double horizon() const noexcept { return times_.back(); }
  const std::vector<double>& times() const noexcept { return times_; }
  bool operator==(const TimeGrid& other) const { return times_ == other.times_; }

 private:
  std::vector<double> times_;
};

struct SolverConfig {
  double delta_reg = 0.0;
  /// Switch delta_reg to kAutoDelta when nu' vanishes on an interval met by
  /// the initial data and delta_reg is 0.
  bool auto_delta = true;
  double newton_tol = 1e-10;
  int max_newton = 50;
  double damping = 0.5;
  int max_halvings = 30;
  int picard_iterations = 200;
  /// Added to the previous slice at interior nodes to form the Newton
  /// initial guess.
  double initial_guess_shift = 0.0;
  /// Lower bound on beta', zeta' in the Jacobian when delta_reg is 0, so a
  /// common plateau does not make it singular.
  double jacobian_floor = 1e-12;

  static constexpr double kAutoDelta = 1e-8;

  void validate() const;
};

struct StepStats {
  int newton_iterations = 0;
  int halvings = 0;
  int picard_iterations = 0;
  double residual = 0.0;
};

/// Nodal trajectories of u, beta(u), zeta(u), nu(u) with the nonlinearity
/// pair actually used (regularized when delta > 0).
struct DiscreteSolution {
  fem::Mesh1D mesh;
  TimeGrid grid;
  monotone::NonlinearityPair pair;
  double delta = 0.0;
  std::vector<fem::NodalField> u;
  std::vector<fem::NodalField> beta;
  std::vector<fem::NodalField> zeta;
  std::vector<fem::NodalField> nu;
  std::vector<StepStats> stats;

  double mean_newton_iterations() const;
  int total_picard_iterations() const;
  /// Fills beta, zeta, nu from u.
  void refresh_derived();
};

enum class Field { kU, kBeta, kZeta, kNu };
const char* to_string(Field f) noexcept;
const std::vector<fem::NodalField>& trajectory(const DiscreteSolution& sol, Field f);

}  // namespace dnstab::solver
