#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dnstab/solver/problem.hpp"

namespace dnstab::stability {

enum class FamilyKind {
  kDelta,            // beta + Id/n, zeta + Id/n
  kMollified,        // box mollification with radius 1/n
  kFluxScale,        // (1 + 1/n) a
  kSourceShift,      // f + g/n
  kInitialShift,     // u0 + w/n
  kBetaSlopeGrowth,  // n beta: not uniform in n
};

const char* to_string(FamilyKind kind) noexcept;
FamilyKind family_kind_from_string(std::string_view name);

struct FamilyOptions {
  /// Direction g of the source shift; sin(pi x) when empty.
  solver::SpaceTimeFunction source_direction;
  /// Direction w of the initial shift; sin(pi x) when empty.
  solver::SpaceFunction initial_direction;
  /// Window [-S, S] on which local uniform distances are reported.
  double window = 5.0;
};

struct FamilyMember {
  int n = 0;
  solver::ProblemSpec spec;
  /// sup_{|s| <= S} |beta_n(s) - beta(s)| and the same for zeta.
  double beta_distance = 0.0;
  double zeta_distance = 0.0;
};

struct PerturbationFamily {
  solver::ProblemSpec base;
  FamilyKind kind;
  std::vector<FamilyMember> members;
  double window = 5.0;
};

/// Builds the members for the given indices. Throws InvalidArgument when the
/// base pair fails its hypotheses or the kind does not apply to the base
/// (for instance a mollification radius above half a breakpoint spacing).
PerturbationFamily make_family(const solver::ProblemSpec& base, FamilyKind kind,
                               const std::vector<int>& indices,
                               const FamilyOptions& options = {});

struct ConstantEnvelope {
  std::string name;
  double base = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double worst = 0.0;
  std::optional<int> violating_index;
  bool passed = true;
};

struct MemberConstants {
  int n = 0;
  double L_beta = 0.0;
  double L_zeta = 0.0;
  double M1 = 0.0;
  double M2 = 0.0;
  std::optional<double> M3;
  std::optional<double> M4;
  double a_lower = 0.0;
  double mu = 0.0;
};

struct UniformityReport {
  std::vector<MemberConstants> members;
  std::vector<ConstantEnvelope> envelopes;
  bool passed = true;
  std::string message() const;
};

/// Per-member constants checked against one envelope fixed by the base:
/// Lipschitz constants and mu within [base/2, 2 base], lower constants M1,
/// M3, a_lower at least base/2, offsets M2, M4 at most 2 base + 1.
UniformityReport check_hypothesis_uniformity(const PerturbationFamily& family);

}  // namespace dnstab::stability
