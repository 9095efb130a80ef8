#include "dnstab/monotone/monotone_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dnstab/errors.hpp"

namespace dnstab::monotone {

namespace {

double point_segment_distance(GraphPoint p, GraphPoint a, GraphPoint b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

double point_ray_distance(GraphPoint p, GraphPoint origin, GraphPoint dir) {
  const double len2 = dir.x * dir.x + dir.y * dir.y;
  const double t = std::max(0.0, ((p.x - origin.x) * dir.x + (p.y - origin.y) * dir.y) / len2);
  return std::hypot(p.x - (origin.x + t * dir.x), p.y - (origin.y + t * dir.y));
}

bool same_point(GraphPoint a, GraphPoint b) { return a.x == b.x && a.y == b.y; }

}  // namespace

MonotoneGraph::MonotoneGraph(std::vector<GraphPoint> vertices, GraphPoint left_direction,
                             GraphPoint right_direction, std::string name)
    : vertices_(std::move(vertices)),
      left_(left_direction),
      right_(right_direction),
      name_(std::move(name)) {
  if (vertices_.empty()) throw InvariantViolation("graph needs at least one vertex");
  for (const auto& v : vertices_) {
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
      throw InvariantViolation("graph vertices must be finite");
    }
  }
  for (std::size_t i = 1; i < vertices_.size(); ++i) {
    const GraphPoint a = vertices_[i - 1];
    const GraphPoint b = vertices_[i];
    if (same_point(a, b)) throw InvariantViolation("repeated graph vertex");
    if (b.x < a.x || b.y < a.y) {
      std::ostringstream os;
      os << "graph is not monotone between (" << a.x << ", " << a.y << ") and (" << b.x
         << ", " << b.y << ")";
      throw InvariantViolation(os.str());
    }
  }
  for (GraphPoint d : {left_, right_}) {
    if (!(d.x > 0.0) || d.y < 0.0 || !std::isfinite(d.y)) {
      throw InvariantViolation("tail directions need dx > 0 and dy >= 0");
    }
  }
  if (distance_to({0.0, 0.0}) > 1e-14) {
    throw InvariantViolation("graph does not pass through the origin");
  }
}

MonotoneGraph MonotoneGraph::from_segments(
    const std::vector<std::pair<GraphPoint, GraphPoint>>& segments,
    GraphPoint left_direction, GraphPoint right_direction, std::string name) {
  if (segments.empty()) throw InvariantViolation("graph needs at least one segment");
  std::vector<GraphPoint> vertices{segments.front().first};
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& [a, b] = segments[i];
    if (!same_point(a, vertices.back())) {
      std::ostringstream os;
      os << "gap before segment " << i << ": (" << vertices.back().x << ", "
         << vertices.back().y << ") to (" << a.x << ", " << a.y
         << "); graph is not maximal";
      throw InvariantViolation(os.str());
    }
    if (!same_point(a, b)) vertices.push_back(b);
  }
  return MonotoneGraph(std::move(vertices), left_direction, right_direction,
                       std::move(name));
}

std::vector<GraphPoint> MonotoneGraph::clipped_polyline(double extent) const {
  double reach = extent + 1.0;
  for (const auto& v : vertices_) reach = std::max({reach, std::abs(v.x) + extent + 1.0});
  const GraphPoint first = vertices_.front();
  const GraphPoint last = vertices_.back();
  const double tl = (reach + std::abs(first.x)) / left_.x;
  const double tr = (reach + std::abs(last.x)) / right_.x;
  std::vector<GraphPoint> line;
  line.push_back({first.x - tl * left_.x, first.y - tl * left_.y});
  line.insert(line.end(), vertices_.begin(), vertices_.end());
  line.push_back({last.x + tr * right_.x, last.y + tr * right_.y});
  return line;
}

double MonotoneGraph::distance_to(GraphPoint p) const {
  double best = std::min(
      point_ray_distance(p, vertices_.front(), {-left_.x, -left_.y}),
      point_ray_distance(p, vertices_.back(), right_));
  for (std::size_t i = 1; i < vertices_.size(); ++i) {
    best = std::min(best, point_segment_distance(p, vertices_[i - 1], vertices_[i]));
  }
  return best;
}

std::pair<double, double> MonotoneGraph::sublinearity_constants() const {
  const double t1 = std::max(left_.y / left_.x, right_.y / right_.x);
  double t2 = 0.0;
  auto visit = [&](GraphPoint p) { t2 = std::max(t2, std::abs(p.y) - t1 * std::abs(p.x)); };
  for (const auto& v : vertices_) visit(v);
  // Axis crossings are the remaining kinks of |y| - t1 |x| along the curve.
  for (std::size_t i = 1; i < vertices_.size(); ++i) {
    const GraphPoint a = vertices_[i - 1];
    const GraphPoint b = vertices_[i];
    if (a.x < 0.0 && b.x > 0.0) visit({0.0, a.y + (b.y - a.y) * (-a.x) / (b.x - a.x)});
    if (a.y < 0.0 && b.y > 0.0) visit({a.x + (b.x - a.x) * (-a.y) / (b.y - a.y), 0.0});
  }
  return {t1, t2};
}

NonlinearityPair resolvent_decompose(const MonotoneGraph& graph) {
  const auto& v = graph.vertices();
  std::vector<double> s(v.size());
  std::vector<double> zeta_values(v.size());
  std::vector<double> beta_values(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    s[i] = v[i].x + v[i].y;
    zeta_values[i] = v[i].x;
    beta_values[i] = v[i].y;
  }
  const GraphPoint l = graph.left_direction();
  const GraphPoint r = graph.right_direction();
  auto zeta = ScalarNonlinearity::piecewise_linear(s, std::move(zeta_values),
                                                   l.x / (l.x + l.y), r.x / (r.x + r.y));
  auto beta = ScalarNonlinearity::piecewise_linear(std::move(s), std::move(beta_values),
                                                   l.y / (l.x + l.y), r.y / (r.x + r.y));
  return NonlinearityPair::with_fitted_coercivity(std::move(beta), std::move(zeta),
                                                  graph.name());
}

MonotoneGraph recompose_graph(const NonlinearityPair& pair) {
  if (!pair.piecewise_linear()) {
    throw InvalidArgument("graph recomposition needs a piecewise-linear pair");
  }
  const auto& zeta = pair.zeta();
  const auto& beta = pair.beta();
  if (!(zeta.left_slope() > 0.0) || !(zeta.right_slope() > 0.0)) {
    throw InvariantViolation("zeta must grow in both tails for the graph to have domain R");
  }
  std::vector<GraphPoint> vertices;
  for (double k : pair.knots()) {
    const GraphPoint p{zeta(k), beta(k)};
    if (vertices.empty() || !same_point(vertices.back(), p)) vertices.push_back(p);
  }
  return MonotoneGraph(std::move(vertices), {zeta.left_slope(), beta.left_slope()},
                       {zeta.right_slope(), beta.right_slope()}, pair.name());
}

std::pair<double, double> recomposed_sublinearity(const NonlinearityPair& pair) {
  const Coercivity c = pair.zeta_coercivity().value_or(fit_coercivity(pair.zeta()));
  if (!(c.slope > 0.0)) throw InvariantViolation("zeta has no coercivity constants");
  const double lb = pair.lipschitz_beta();
  return {lb / c.slope, lb * c.offset / c.slope};
}

double hausdorff_distance(const MonotoneGraph& a, const MonotoneGraph& b, double extent,
                          std::size_t samples) {
  if (samples < 2) throw InvalidArgument("Hausdorff sampling needs at least 2 points per segment");
  auto one_sided = [extent, samples](const MonotoneGraph& from, const MonotoneGraph& to) {
    const auto line = from.clipped_polyline(extent);
    double worst = 0.0;
    for (std::size_t i = 1; i < line.size(); ++i) {
      for (std::size_t j = 0; j < samples; ++j) {
        const double t = static_cast<double>(j) / static_cast<double>(samples - 1);
        const GraphPoint p{line[i - 1].x + t * (line[i].x - line[i - 1].x),
                           line[i - 1].y + t * (line[i].y - line[i - 1].y)};
        if (std::abs(p.x) > extent || std::abs(p.y) > extent) continue;
        worst = std::max(worst, to.distance_to(p));
      }
    }
    return worst;
  };
  return std::max(one_sided(a, b), one_sided(b, a));
}

}  // namespace dnstab::monotone
