#pragma once

#include <cstddef>
#include <numbers>
#include <optional>
#include <vector>

#include "zermelo/errors.hpp"

namespace zermelo {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kDegToRad = kPi / 180.0;

/// Mean Earth radius used throughout, in kilometres.
inline constexpr double kEarthRadiusKm = 6367.449;

/// Wrap an angle in radians to (-pi, pi].
double wrap_angle(double a);

/// Wrap a longitude in degrees to (-180, 180].
double wrap_longitude(double deg);

/// A position. Plain coordinates on the Euclidean plane, or
/// (longitude, latitude) in degrees on the sphere.
struct Point {
  double x1 = 0.0;
  double x2 = 0.0;
};

struct SphereParams {
  double radius = kEarthRadiusKm;  // km
  double kappa = kDegToRad;        // radians per angular coordinate unit

  /// Conversion scale: length per angular unit. K = kappa * radius.
  double K_km() const { return kappa * radius; }
  /// Same scale in metres per angular unit, matching m/s velocities.
  double K_m() const { return 1000.0 * kappa * radius; }
};

/// The navigation space: Euclidean plane or sphere. All geometric operations
/// dispatch on this; coordinates from different spaces never mix.
class Space {
 public:
  static Space euclidean() { return Space{}; }
  static Space spherical(SphereParams p = SphereParams{}) {
    Space s;
    s.sphere_ = p;
    return s;
  }

  bool is_spherical() const { return sphere_.has_value(); }
  const SphereParams& sphere() const { return sphere_.value(); }

  /// Convert a distance() value into the length unit that velocities are
  /// expressed in (metres on the sphere, unchanged on the plane).
  double to_speed_units(double d) const { return is_spherical() ? d * 1000.0 : d; }

 private:
  std::optional<SphereParams> sphere_;
};

/// Distance between two points: straight-line norm on the plane,
/// great-circle (haversine) distance in km on the sphere.
double distance(const Space& space, const Point& a, const Point& b);

/// Heading from a toward b, measured counterclockwise from east in
/// (-pi, pi]. Throws CoincidentPointsError when a == b.
double bearing(const Space& space, const Point& a, const Point& b);

/// n points from a to b along the minimum-distance path: uniform chord
/// subdivision on the plane, great-circle interpolation on the sphere.
/// Endpoints are exact. Throws AntipodalPointsError when the spherical
/// geodesic is not unique.
std::vector<Point> geodesic_path(const Space& space, const Point& a, const Point& b,
                                 std::size_t n);

/// Midpoint of the minimum-distance path from a to b.
Point geodesic_midpoint(const Space& space, const Point& a, const Point& b);

/// Validate and normalize a point for the given space (wraps longitude,
/// checks latitude range). Used at I/O boundaries.
Point normalized(const Space& space, Point p);

}  // namespace zermelo
