#include "zermelo/analysis.hpp"

#include <cmath>
#include <string>

namespace zermelo {

std::vector<Point> min_distance_route(const Space& space, const Point& a, const Point& b,
                                      std::size_t n) {
  return geodesic_path(space, a, b, n);
}

namespace {

struct SegmentSolve {
  double time = 0.0;
  double heading = 0.0;
  bool land = false;
  bool degenerate = false;
};

// Ground speed along a fixed segment: the along-track current component
// plus what is left of V after cancelling the cross-track component.
SegmentSolve solve_segment(const Point& a, const Point& b, double speed, const Field& field,
                           const Space& space) {
  SegmentSolve out;
  const double len = space.to_speed_units(distance(space, a, b));
  if (len == 0.0) {
    out.degenerate = true;
    return out;
  }
  const Point mid = geodesic_midpoint(space, a, b);
  if (field.is_land(a) || field.is_land(b) || field.is_land(mid)) {
    out.land = true;
    return out;
  }
  const double brg = bearing(space, a, b);
  const double ux = std::cos(brg), uy = std::sin(brg);
  const FieldSample w = field.sample(mid);
  const double along = w.w1 * ux + w.w2 * uy;
  const double perp2 = (w.w1 * w.w1 + w.w2 * w.w2) - along * along;
  if (speed * speed <= perp2)
    throw CurrentExceedsSpeedError(mid.x1, mid.x2,
                                   "cross-track current exceeds speed near (" +
                                       std::to_string(mid.x1) + ", " + std::to_string(mid.x2) +
                                       ")");
  const double g = along + std::sqrt(speed * speed - perp2);
  if (g <= 0.0)
    throw CurrentExceedsSpeedError(mid.x1, mid.x2,
                                   "opposing current stronger than the vessel near (" +
                                       std::to_string(mid.x1) + ", " + std::to_string(mid.x2) +
                                       ")");
  out.time = len / g;
  // Water velocity = ground velocity - current.
  out.heading = std::atan2(g * uy - w.w2, g * ux - w.w1);
  return out;
}

struct PassResult {
  double time = 0.0;
  bool land = false;
};

PassResult total_time(const std::vector<Point>& pts, double speed, const Field& field,
                      const Space& space) {
  PassResult res;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const SegmentSolve s = solve_segment(pts[i], pts[i + 1], speed, field, space);
    if (s.land) {
      res.land = true;
      continue;
    }
    res.time += s.time;
  }
  return res;
}

std::vector<Point> subdivide(const std::vector<Point>& pts, const Space& space) {
  std::vector<Point> out;
  out.reserve(pts.size() * 2);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    out.push_back(pts[i]);
    out.push_back(geodesic_midpoint(space, pts[i], pts[i + 1]));
  }
  out.push_back(pts.back());
  return out;
}

}  // namespace

PathMetrics path_travel_time(std::span<const Point> path, double speed, const Field& field,
                             const Space& space) {
  if (path.size() < 2) throw ConfigError("path_travel_time: need at least 2 points");
  if (!(speed > 0.0)) throw NonPositiveSpeedError("path_travel_time: speed must be positive");

  PathMetrics metrics;
  for (std::size_t i = 0; i + 1 < path.size(); ++i)
    metrics.path_length += distance(space, path[i], path[i + 1]);

  std::vector<Point> pts(path.begin(), path.end());
  PassResult pass = total_time(pts, speed, field, space);
  // Midpoint sampling is exact only for constant currents; bisect until the
  // quadrature settles.
  for (int depth = 0; depth < 16; ++depth) {
    pts = subdivide(pts, space);
    const PassResult refined = total_time(pts, speed, field, space);
    const bool settled = std::abs(refined.time - pass.time) < 1e-4 * std::abs(refined.time);
    pass = refined;
    if (settled) break;
  }
  metrics.travel_time = pass.time;
  metrics.land_on_path = pass.land;
  return metrics;
}

PathMetrics route_metrics(std::span<const Point> path, double speed, const Field& field,
                          const Space& space, const std::optional<VesselSpec>& vessel) {
  PathMetrics metrics = path_travel_time(path, speed, field, space);
  if (vessel) {
    const double hours = space.is_spherical() ? metrics.travel_time / 3600.0 : metrics.travel_time;
    metrics.fuel_kg = fuel_rate(speed, *vessel) * hours;
  }
  return metrics;
}

double fuel_rate(double v_water, const VesselSpec& vessel) {
  if (!(v_water > 0.0)) throw NonPositiveSpeedError("fuel_rate: speed must be positive");
  if (!(vessel.displacement > 0.0) || !(vessel.length > 0.0) || !(vessel.sfoc > 0.0))
    throw ConfigError("fuel_rate: vessel spec fields must be positive");
  const double c = 3.7 * (std::sqrt(vessel.length) + 75.0 / v_water);
  const double power_kw = std::pow(vessel.displacement, 2.0 / 3.0) * v_water * v_water * v_water / c;
  return vessel.sfoc * power_kw / 1000.0;  // g/h -> kg/h
}

std::vector<double> path_headings(std::span<const Point> path, double speed, const Field& field,
                                  const Space& space) {
  std::vector<double> headings;
  headings.reserve(path.size());
  double last = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const SegmentSolve s = solve_segment(path[i], path[i + 1], speed, field, space);
    if (!s.degenerate && !s.land) last = s.heading;
    headings.push_back(last);
  }
  headings.push_back(last);
  return headings;
}

}  // namespace zermelo
