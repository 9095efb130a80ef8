#include "dnstab/monotone/presets.hpp"

#include "dnstab/errors.hpp"

namespace dnstab::monotone::presets {

namespace {

ScalarNonlinearity stefan_zeta() {
  return ScalarNonlinearity::piecewise_linear({0.0, 1.0}, {0.0, 0.0}, 1.0, 1.0);
}

}  // namespace

NonlinearityPair identity() {
  return NonlinearityPair(ScalarNonlinearity::linear(), ScalarNonlinearity::linear(),
                          Coercivity{1.0, 0.0}, Coercivity{1.0, 0.0}, std::nullopt,
                          "identity");
}

NonlinearityPair stefan() {
  return NonlinearityPair(ScalarNonlinearity::linear(), stefan_zeta(), Coercivity{1.0, 1.0},
                          Coercivity{1.0, 0.0}, std::nullopt, "stefan");
}

NonlinearityPair richards_saturation() {
  auto beta = ScalarNonlinearity::piecewise_linear({1.0}, {1.0}, 1.0, 0.0);
  return NonlinearityPair(std::move(beta), ScalarNonlinearity::linear(),
                          Coercivity{1.0, 0.0}, std::nullopt, std::nullopt,
                          "richards-saturation");
}

NonlinearityPair step_graph() {
  auto beta = ScalarNonlinearity::piecewise_linear({0.0, 1.0}, {0.0, 1.0}, 0.0, 0.0);
  return NonlinearityPair(std::move(beta), stefan_zeta(), Coercivity{1.0, 1.0},
                          std::nullopt, std::nullopt, "step-graph");
}

NonlinearityPair common_plateau() {
  auto zeta = ScalarNonlinearity::piecewise_linear({0.0, 2.0}, {0.0, 0.0}, 1.0, 1.0);
  return NonlinearityPair(stefan_zeta(), std::move(zeta), Coercivity{1.0, 2.0},
                          Coercivity{1.0, 1.0}, std::nullopt, "common-plateau");
}

const std::vector<std::string>& pair_names() {
  static const std::vector<std::string> names{"identity", "stefan", "richards-saturation",
                                              "step-graph", "common-plateau"};
  return names;
}

NonlinearityPair pair_by_name(std::string_view name) {
  if (name == "identity") return identity();
  if (name == "stefan") return stefan();
  if (name == "richards-saturation") return richards_saturation();
  if (name == "step-graph") return step_graph();
  if (name == "common-plateau") return common_plateau();
  throw InvalidArgument("unknown nonlinearity preset '" + std::string(name) + "'");
}

namespace graphs {

MonotoneGraph identity() {
  return MonotoneGraph({{0.0, 0.0}}, {1.0, 1.0}, {1.0, 1.0}, "identity");
}

MonotoneGraph doubling() {
  return MonotoneGraph({{0.0, 0.0}}, {1.0, 2.0}, {1.0, 2.0}, "doubling");
}

MonotoneGraph step() {
  return MonotoneGraph::from_segments({{{0.0, 0.0}, {0.0, 1.0}}}, {1.0, 0.0}, {1.0, 0.0},
                                      "step");
}

MonotoneGraph stefan() {
  return MonotoneGraph::from_segments({{{0.0, 0.0}, {0.0, 1.0}}}, {1.0, 1.0}, {1.0, 1.0},
                                      "stefan");
}

MonotoneGraph richards() {
  return MonotoneGraph({{0.0, 0.0}, {1.0, 1.0}}, {1.0, 1.0}, {1.0, 0.0}, "richards");
}

std::vector<MonotoneGraph> all() { return {identity(), doubling(), step(), stefan(), richards()}; }

}  // namespace graphs

}  // namespace dnstab::monotone::presets
