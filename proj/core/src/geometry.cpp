#include "zermelo/geometry.hpp"

#include <array>
#include <cmath>

namespace zermelo {

double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  if (a > kPi) a -= 2.0 * kPi;
  return a;
}

double wrap_longitude(double deg) {
  deg = std::fmod(deg, 360.0);
  if (deg <= -180.0) deg += 360.0;
  if (deg > 180.0) deg -= 360.0;
  return deg;
}

namespace {

std::array<double, 3> unit_vector(const Point& p) {
  const double lon = p.x1 * kDegToRad;
  const double lat = p.x2 * kDegToRad;
  const double clat = std::cos(lat);
  return {clat * std::cos(lon), clat * std::sin(lon), std::sin(lat)};
}

double haversine_km(const Point& a, const Point& b, const SphereParams& sp) {
  const double p1 = a.x2 * kDegToRad;
  const double p2 = b.x2 * kDegToRad;
  const double dphi = p2 - p1;
  const double dlam = (b.x1 - a.x1) * kDegToRad;
  const double sp2 = std::sin(0.5 * dphi);
  const double sl2 = std::sin(0.5 * dlam);
  const double h = sp2 * sp2 + std::cos(p1) * std::cos(p2) * sl2 * sl2;
  return 2.0 * sp.radius * std::atan2(std::sqrt(h), std::sqrt(std::max(0.0, 1.0 - h)));
}

}  // namespace

double distance(const Space& space, const Point& a, const Point& b) {
  if (!space.is_spherical()) return std::hypot(b.x1 - a.x1, b.x2 - a.x2);
  return haversine_km(a, b, space.sphere());
}

double bearing(const Space& space, const Point& a, const Point& b) {
  if (a.x1 == b.x1 && a.x2 == b.x2)
    throw CoincidentPointsError("bearing: coincident points");
  if (!space.is_spherical()) return std::atan2(b.x2 - a.x2, b.x1 - a.x1);

  // Great-circle initial bearing. With c = cos(lon)cos(lat) and
  // s = sin(lon)cos(lat) the two-argument arctangent below gives the
  // azimuth clockwise from north; convert to counterclockwise from east.
  const double li = a.x1 * kDegToRad, pi_ = a.x2 * kDegToRad;
  const double lj = b.x1 * kDegToRad, pj = b.x2 * kDegToRad;
  const double ci = std::cos(li) * std::cos(pi_), si = std::sin(li) * std::cos(pi_);
  const double cj = std::cos(lj) * std::cos(pj), sj = std::sin(lj) * std::cos(pj);
  const double num = -cj * si + ci * sj;
  const double den = -(ci * cj + si * sj) * std::sin(pi_) + (ci * ci + si * si) * std::sin(pj);
  if (num == 0.0 && den == 0.0)
    throw CoincidentPointsError("bearing: undefined direction (identical or antipodal points)");
  return wrap_angle(kPi / 2.0 - std::atan2(num, den));
}

std::vector<Point> geodesic_path(const Space& space, const Point& a, const Point& b,
                                 std::size_t n) {
  if (n < 2) throw ConfigError("geodesic_path: need at least 2 points");
  std::vector<Point> out;
  out.reserve(n);

  if (!space.is_spherical()) {
    for (std::size_t k = 0; k < n; ++k) {
      const double t = static_cast<double>(k) / static_cast<double>(n - 1);
      out.push_back({a.x1 + t * (b.x1 - a.x1), a.x2 + t * (b.x2 - a.x2)});
    }
    out.front() = a;
    out.back() = b;
    return out;
  }

  const auto u = unit_vector(a);
  const auto v = unit_vector(b);
  const double dot = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
  const std::array<double, 3> cr = {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2],
                                    u[0] * v[1] - u[1] * v[0]};
  const double cross = std::sqrt(cr[0] * cr[0] + cr[1] * cr[1] + cr[2] * cr[2]);
  const double omega = std::atan2(cross, dot);
  if (dot < 0.0 && cross < 1e-9)
    throw AntipodalPointsError("geodesic_path: antipodal points, geodesic not unique");

  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(n - 1);
    std::array<double, 3> w;
    if (omega < 1e-12) {
      for (int i = 0; i < 3; ++i) w[i] = (1.0 - t) * u[i] + t * v[i];
    } else {
      const double sa = std::sin((1.0 - t) * omega) / std::sin(omega);
      const double sb = std::sin(t * omega) / std::sin(omega);
      for (int i = 0; i < 3; ++i) w[i] = sa * u[i] + sb * v[i];
    }
    const double norm = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
    const double lat = std::asin(w[2] / norm) / kDegToRad;
    const double lon = std::atan2(w[1], w[0]) / kDegToRad;
    out.push_back({lon, lat});
  }
  out.front() = a;
  out.back() = b;
  return out;
}

Point geodesic_midpoint(const Space& space, const Point& a, const Point& b) {
  if (!space.is_spherical()) return {0.5 * (a.x1 + b.x1), 0.5 * (a.x2 + b.x2)};
  return geodesic_path(space, a, b, 3)[1];
}

Point normalized(const Space& space, Point p) {
  if (!space.is_spherical()) return p;
  if (p.x2 < -90.0 || p.x2 > 90.0)
    throw ConfigError("latitude out of [-90, 90]: " + std::to_string(p.x2));
  p.x1 = wrap_longitude(p.x1);
  return p;
}

}  // namespace zermelo
