#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <vector>

#include "zermelo/field.hpp"
#include "zermelo/geometry.hpp"

namespace zermelo {

/// ODE state: position, heading over water (radians, counterclockwise from
/// east, kept in (-pi, pi]), and elapsed time.
struct TrajectoryState {
  Point pos;
  double alpha = 0.0;
  double t = 0.0;
};

struct VesselKinematics {
  double speed = 1.0;  // V, speed over water; m/s on the sphere
};

struct Derivatives {
  double dx1 = 0.0;
  double dx2 = 0.0;
  double dalpha = 0.0;
};

template <typename F>
concept RhsFunction = requires(F f, const TrajectoryState& s) {
  { f(s) } -> std::convertible_to<Derivatives>;
};

/// Time-optimal steering dynamics on the plane:
///   dx1/dt = V cos a + w1,   dx2/dt = V sin a + w2,
///   da/dt  = sin^2 a * w21 + sin a cos a * (w11 - w22) - cos^2 a * w12.
Derivatives rhs_plane(const TrajectoryState& s, double speed, const Field& field);

/// The spherical analogue, with longitude/latitude in degrees, heading in
/// radians and velocities in m/s. K converts angular units to metres.
/// Throws PoleSingularityError when cos(kappa*phi) < 1e-6.
///
/// Note the curvature term carries a factor kappa: without it, zero-field
/// trajectories fail to follow great circles (the printed form of the
/// heading equation drops it; the appendix derivation keeps it).
Derivatives rhs_sphere(const TrajectoryState& s, double speed, const Field& field,
                       const SphereParams& sp);

/// Classical fixed-step RK4 update of (x1, x2, alpha); advances t by dt and
/// renormalizes alpha to (-pi, pi].
template <RhsFunction Rhs>
TrajectoryState rk4_step(const TrajectoryState& s, double dt, Rhs&& rhs) {
  auto at = [&](double frac, const Derivatives& d) {
    return TrajectoryState{{s.pos.x1 + frac * dt * d.dx1, s.pos.x2 + frac * dt * d.dx2},
                           s.alpha + frac * dt * d.dalpha, s.t + frac * dt};
  };
  const Derivatives k1 = rhs(s);
  const Derivatives k2 = rhs(at(0.5, k1));
  const Derivatives k3 = rhs(at(0.5, k2));
  const Derivatives k4 = rhs(at(1.0, k3));
  TrajectoryState out;
  out.pos.x1 = s.pos.x1 + dt / 6.0 * (k1.dx1 + 2.0 * k2.dx1 + 2.0 * k3.dx1 + k4.dx1);
  out.pos.x2 = s.pos.x2 + dt / 6.0 * (k1.dx2 + 2.0 * k2.dx2 + 2.0 * k3.dx2 + k4.dx2);
  out.alpha =
      wrap_angle(s.alpha + dt / 6.0 * (k1.dalpha + 2.0 * k2.dalpha + 2.0 * k3.dalpha + k4.dalpha));
  out.t = s.t + dt;
  return out;
}

/// Evolve one checkpoint interval: round(tau/dt) RK4 steps. Returns the
/// states produced, final one included (the input state is not repeated).
/// Errors from a step are rethrown as SteppedError with the step index.
template <RhsFunction Rhs>
std::vector<TrajectoryState> integrate_leg(const TrajectoryState& s0, double tau, double dt,
                                           Rhs&& rhs) {
  if (!(dt > 0.0) || tau < dt) throw ConfigError("integrate_leg: requires tau >= dt > 0");
  const auto n = static_cast<std::size_t>(std::llround(tau / dt));
  std::vector<TrajectoryState> out;
  out.reserve(n);
  TrajectoryState s = s0;
  for (std::size_t i = 0; i < n; ++i) {
    try {
      s = rk4_step(s, dt, rhs);
    } catch (const Error& e) {
      throw SteppedError(i, std::current_exception(),
                         "integrate_leg: step " + std::to_string(i) + ": " + e.what());
    }
    out.push_back(s);
  }
  return out;
}

/// RHS for the given space, as a cheap copyable callable.
class SpaceRhs {
 public:
  SpaceRhs(const Space& space, double speed, const Field& field)
      : space_(&space), field_(&field), speed_(speed) {}

  Derivatives operator()(const TrajectoryState& s) const {
    return space_->is_spherical() ? rhs_sphere(s, speed_, *field_, space_->sphere())
                                  : rhs_plane(s, speed_, *field_);
  }

 private:
  const Space* space_;
  const Field* field_;
  double speed_;
};

}  // namespace zermelo
