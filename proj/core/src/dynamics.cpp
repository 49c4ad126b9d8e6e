#include "zermelo/dynamics.hpp"

#include <cmath>
#include <string>

namespace zermelo {

Derivatives rhs_plane(const TrajectoryState& s, double speed, const Field& field) {
  const FieldSample w = field.sample(s.pos);
  const FieldJacobian J = field.jacobian(s.pos);
  const double ca = std::cos(s.alpha);
  const double sa = std::sin(s.alpha);
  return {speed * ca + w.w1, speed * sa + w.w2,
          sa * sa * J.w21 + sa * ca * (J.w11 - J.w22) - ca * ca * J.w12};
}

Derivatives rhs_sphere(const TrajectoryState& s, double speed, const Field& field,
                       const SphereParams& sp) {
  const double phi = sp.kappa * s.pos.x2;  // latitude in radians
  const double cphi = std::cos(phi);
  if (std::abs(cphi) < 1e-6)
    throw PoleSingularityError("rhs_sphere: latitude " + std::to_string(s.pos.x2) +
                               " too close to a pole");
  const FieldSample w = field.sample(s.pos);
  const FieldJacobian J = field.jacobian(s.pos);
  const double K = sp.K_m();  // metres per angular unit
  const double ca = std::cos(s.alpha);
  const double sa = std::sin(s.alpha);
  const double sec = 1.0 / cphi;
  const double tphi = std::tan(phi);

  Derivatives d;
  d.dx1 = (speed * ca + w.w1) / (K * cphi);
  d.dx2 = (speed * sa + w.w2) / K;
  // [cos a, sin a] [[sec w11, w12], [sec w21, w22]] [sin a, -cos a]^T
  const double bracket =
      sa * ca * sec * J.w11 + sa * sa * sec * J.w21 - ca * ca * J.w12 - ca * sa * J.w22;
  const double curvature = sp.kappa * ca * tphi * (speed + w.w1 * ca + w.w2 * sa);
  d.dalpha = (bracket - curvature) / K;
  return d;
}

}  // namespace zermelo
