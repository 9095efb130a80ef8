#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dnstab/monotone/monotone_graph.hpp"
#include "dnstab/monotone/nonlinearity_pair.hpp"

namespace dnstab::monotone::presets {

/// beta = zeta = Id.
NonlinearityPair identity();
/// beta = Id, zeta vanishing on [0, 1] with unit slope elsewhere.
NonlinearityPair stefan();
/// zeta = Id, beta(s) = min(s, 1).
NonlinearityPair richards_saturation();
/// beta = max(0, min(s, 1)), zeta = Id - beta: the resolvent pair of the
/// Heaviside step graph. nu vanishes identically.
NonlinearityPair step_graph();
/// beta vanishes on [0, 1], zeta on [0, 2]: a shared plateau [0, 1] next to
/// a latent interval [1, 2] where only zeta is flat.
NonlinearityPair common_plateau();

/// Looks a pair preset up by name; throws InvalidArgument for unknown names.
NonlinearityPair pair_by_name(std::string_view name);
const std::vector<std::string>& pair_names();

namespace graphs {
/// y = x.
MonotoneGraph identity();
/// y = 2x.
MonotoneGraph doubling();
/// y = 0 for x < 0, [0, 1] at x = 0, y = 1 for x > 0.
MonotoneGraph step();
/// y = x for x < 0, [0, 1] at x = 0, y = x + 1 for x > 0.
MonotoneGraph stefan();
/// y = x for x < 1, y = 1 for x >= 1.
MonotoneGraph richards();

std::vector<MonotoneGraph> all();
}  // namespace graphs

}  // namespace dnstab::monotone::presets
