#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "zermelo/field.hpp"
#include "zermelo/geometry.hpp"
#include "zermelo/smoothing.hpp"

namespace zermelo {

struct PathMetrics {
  double travel_time = 0.0;
  double path_length = 0.0;
  std::optional<double> fuel_kg;
  bool land_on_path = false;  // some segments crossed land and were skipped
};

/// Vessel data for the Harvald fuel model.
struct VesselSpec {
  double displacement = 0.0;  // tonnes
  double length = 0.0;        // metres
  double sfoc = 185.0;        // g/kWh
};

/// The minimum-distance comparison route (straight chord / great circle).
std::vector<Point> min_distance_route(const Space& space, const Point& a, const Point& b,
                                      std::size_t n);

/// Time to traverse a fixed geometric path at water speed `speed` through
/// the currents: per segment the ground speed is (w.u) + sqrt(V^2 - |w_perp|^2)
/// with w sampled at the segment midpoint, refined by recursive bisection
/// until the total changes by < 1e-4 relative. Land segments are skipped and
/// flagged. Throws CurrentExceedsSpeedError when a crossing is infeasible.
PathMetrics path_travel_time(std::span<const Point> path, double speed, const Field& field,
                             const Space& space);

/// Full metrics for a polyline route: length, re-measured travel time, and
/// fuel when a vessel is given.
PathMetrics route_metrics(std::span<const Point> path, double speed, const Field& field,
                          const Space& space, const std::optional<VesselSpec>& vessel = {});

/// Harvald's empirical model: power to hold v_water through the water,
/// P = disp^(2/3) v^3 / C with C = 3.7 (sqrt(L) + 75/v), in kW; fuel rate is
/// SFOC * P, returned in kg/h. Throws NonPositiveSpeedError for v <= 0.
double fuel_rate(double v_water, const VesselSpec& vessel);

/// Heading over water that produces the ground track of each segment of a
/// path (last entry duplicated), matching the path_travel_time solve.
std::vector<double> path_headings(std::span<const Point> path, double speed, const Field& field,
                                  const Space& space);

}  // namespace zermelo
