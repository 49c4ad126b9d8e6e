#pragma once

#include <cstddef>
#include <vector>

#include "zermelo/field.hpp"
#include "zermelo/geometry.hpp"
#include "zermelo/search.hpp"

namespace zermelo {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// A route discretized to points q_0..q_N separated by h units of time.
/// Endpoints stay fixed under all smoothing operations.
struct DiscreteRoute {
  std::vector<Point> points;
  double h = 0.0;
  Space space;
};

struct SmoothingConfig {
  int iterations = 10000;
  double fd_step = 1e-6;         // relative step for discrete-Lagrangian derivatives
  double singular_margin = 0.0;  // minimum allowed V^2 - W^2; 0 means 1e-4 * V^2
  int threads = 1;

  double resolved_margin(double speed) const {
    return singular_margin > 0.0 ? singular_margin : 1e-4 * speed * speed;
  }
};

/// Unconstrained time-rate Lagrangian: the time to cover qdot through the
/// current at q, from the quadratic ground-speed constraint
///   (x1' - w1 t')^2 + (x2' - w2 t')^2 = V^2 t'^2.
/// Throws CurrentExceedsSpeedError when V^2 - |w|^2 < margin.
double lagrangian_hat(const Point& q, const Vec2& qdot, double speed, const Field& field,
                      double margin);

/// Trapezoidal discretization of the squared time-rate Lagrangian over one
/// segment: (h/2) * (Lhat^2(q0, u) + Lhat^2(q1, u)) with u = (q1-q0)/h.
/// The square restores regularity; the plain Lhat does not converge.
double discrete_lagrangian(const Point& q0, const Point& q1, double h, double speed,
                           const Field& field, double margin);

/// Total discrete action sum over the route's segments.
double discrete_action(const DiscreteRoute& route, double speed, const Field& field, double margin);

/// The discrete Euler-Lagrange residual at interior index k:
/// D2 Ld(q_{k-1}, q_k) + D1 Ld(q_k, q_{k+1}), by central differences with
/// step fd_step * max(1, |q_k|).
Vec2 del_residual(const DiscreteRoute& route, std::size_t k, double speed, const Field& field,
                  const SmoothingConfig& cfg);

/// One Newton-Jacobi sweep: every interior point is moved by the Newton
/// update of its own 3-point subproblem, all updates computed from the
/// pre-sweep route. Endpoints unchanged. Throws SingularHessianError when a
/// 2x2 system determinant falls below 1e-12 in magnitude.
DiscreteRoute newton_jacobi_sweep(const DiscreteRoute& route, double speed, const Field& field,
                                  const SmoothingConfig& cfg);

struct SmoothResult {
  DiscreteRoute route;
  std::vector<double> action_trace;  // action before any sweep, then after each
};

/// Run cfg.iterations sweeps, recording the action trace. Exits early when
/// the largest interior displacement in a sweep drops below 1e-12.
SmoothResult smooth(const DiscreteRoute& route, const SmoothingConfig& cfg, double speed,
                    const Field& field);

/// Resample a search route by elapsed time to segments+1 uniformly spaced
/// points, with h = total_time / segments.
DiscreteRoute resample_by_time(const Route& route, int segments, const Space& space);

/// Smooth a spherical route in locally scaled Euclidean coordinates
/// (x1 * K cos(kappa*phi_ref), x2 * K), phi_ref the route's mean latitude.
/// An approximation: the variational scheme itself is planar.
SmoothResult smooth_spherical(const DiscreteRoute& route, const SmoothingConfig& cfg, double speed,
                              const Field& field);

}  // namespace zermelo
