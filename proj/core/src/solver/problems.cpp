#include "dnstab/solver/problems.hpp"

#include <cmath>
#include <numbers>

#include "dnstab/errors.hpp"
#include "dnstab/monotone/presets.hpp"

namespace dnstab::solver::problems {

namespace {

SpaceFunction sine(double amplitude) {
  return [amplitude](double x) { return amplitude * std::sin(std::numbers::pi * x); };
}

}  // namespace

ProblemSpec heat(double horizon) {
  return ProblemSpec(monotone::presets::identity(), fem::FluxLaw::linear(), nullptr, sine(1.0),
                     horizon, "heat");
}

ProblemSpec stefan(double horizon) {
  return ProblemSpec(monotone::presets::stefan(), fem::FluxLaw::linear(), nullptr, sine(2.0),
                     horizon, "stefan");
}

ProblemSpec richards(double horizon) {
  return ProblemSpec(monotone::presets::richards_saturation(), fem::FluxLaw::mobility(), nullptr,
                     sine(1.5), horizon, "richards");
}

ProblemSpec p_laplace(double p, double horizon) {
  return ProblemSpec(monotone::presets::identity(), fem::FluxLaw::p_laplace(p), nullptr,
                     sine(1.0), horizon, "p-laplace");
}

ProblemSpec common_plateau(double horizon) {
  auto u0 = [](double x) {
    return 0.8 * std::sin(std::numbers::pi * x) + 4.0 * std::exp(-100.0 * (x - 0.5) * (x - 0.5));
  };
  return ProblemSpec(monotone::presets::common_plateau(), fem::FluxLaw::linear(), nullptr, u0,
                     horizon, "common-plateau");
}

ProblemSpec forced_heat(double horizon) {
  return ProblemSpec(
      monotone::presets::identity(), fem::FluxLaw::linear(),
      [](double x, double) { return std::sin(std::numbers::pi * x); },
      [](double) { return 0.0; }, horizon, "forced-heat");
}

ProblemSpec problem_by_name(std::string_view name, double horizon) {
  if (name == "heat") return heat(horizon);
  if (name == "stefan") return stefan(horizon);
  if (name == "richards") return richards(horizon);
  if (name == "p-laplace-1.5") return p_laplace(1.5, horizon);
  if (name == "p-laplace-3") return p_laplace(3.0, horizon);
  if (name == "common-plateau") return common_plateau(horizon);
  if (name == "forced-heat") return forced_heat(horizon);
  throw InvalidArgument("unknown problem '" + std::string(name) + "'");
}

const std::vector<std::string>& problem_names() {
  static const std::vector<std::string> names{"heat",          "stefan",      "richards",
                                              "p-laplace-1.5", "p-laplace-3", "common-plateau",
                                              "forced-heat"};
  return names;
}

}  // namespace dnstab::solver::problems
