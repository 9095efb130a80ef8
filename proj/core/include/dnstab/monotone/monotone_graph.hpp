#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dnstab/monotone/nonlinearity_pair.hpp"

namespace dnstab::monotone {

struct GraphPoint {
  double x = 0.0;
  double y = 0.0;
};

/// A maximal monotone graph in the plane with domain R: a connected
/// nondecreasing polyline (horizontal, vertical and sloped segments) through
/// the origin, continued by affine tails. Tail directions point away from the
/// polyline in the +x sense and must have dx > 0.
class MonotoneGraph {
 public:
  MonotoneGraph(std::vector<GraphPoint> vertices, GraphPoint left_direction,
                GraphPoint right_direction, std::string name = {});

  /// Assembles a graph from segments listed left to right. Consecutive
  /// segments must share endpoints; a gap means the graph is not maximal.
  static MonotoneGraph from_segments(
      const std::vector<std::pair<GraphPoint, GraphPoint>>& segments,
      GraphPoint left_direction, GraphPoint right_direction, std::string name = {});

  const std::vector<GraphPoint>& vertices() const noexcept { return vertices_; }
  GraphPoint left_direction() const noexcept { return left_; }
  GraphPoint right_direction() const noexcept { return right_; }
  const std::string& name() const noexcept { return name_; }

  /// Polyline covering the graph inside the box |x|, |y| <= extent (tails
  /// clipped there).
  std::vector<GraphPoint> clipped_polyline(double extent) const;

  /// Euclidean distance from p to the graph.
  double distance_to(GraphPoint p) const;

  /// Smallest T1, T2 with |y| <= T1 |x| + T2 on the graph.
  std::pair<double, double> sublinearity_constants() const;

 private:
  std::vector<GraphPoint> vertices_;
  GraphPoint left_;
  GraphPoint right_;
  std::string name_;
};

/// zeta = (Id + T)^{-1}, beta = Id - zeta. Both are 1-Lipschitz and
/// nondecreasing; s -> (zeta(s), beta(s)) traces the graph.
NonlinearityPair resolvent_decompose(const MonotoneGraph& graph);

/// The graph {(zeta(s), beta(s)) : s in R} of a piecewise-linear pair whose
/// zeta has positive tail slopes.
MonotoneGraph recompose_graph(const NonlinearityPair& pair);

/// Growth constants T1 = L_beta / M1 and T2 = L_beta M2 / M1 of the
/// recomposed graph, from the zeta coercivity record.
std::pair<double, double> recomposed_sublinearity(const NonlinearityPair& pair);

/// Symmetric Hausdorff distance between the parts of two graphs with
/// |x|, |y| <= extent, from `samples` points per polyline segment.
double hausdorff_distance(const MonotoneGraph& a, const MonotoneGraph& b,
                          double extent = 10.0, std::size_t samples = 64);

}  // namespace dnstab::monotone
