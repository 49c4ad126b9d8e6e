#include "zermelo/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace zermelo {

double lagrangian_hat(const Point& q, const Vec2& qdot, double speed, const Field& field,
                      double margin) {
  const double X = std::hypot(qdot.x, qdot.y);
  if (X == 0.0) return 0.0;
  const FieldSample w = field.sample(q);
  const double W2 = w.w1 * w.w1 + w.w2 * w.w2;
  const double denom = speed * speed - W2;
  if (denom < margin)
    throw CurrentExceedsSpeedError(q.x1, q.x2,
                                   "current as fast as the vessel at (" + std::to_string(q.x1) +
                                       ", " + std::to_string(q.x2) + ")");
  if (W2 == 0.0) return X / speed;
  const double W = std::sqrt(W2);
  const double cosb = std::clamp((qdot.x * w.w1 + qdot.y * w.w2) / (X * W), -1.0, 1.0);
  const double sin2b = 1.0 - cosb * cosb;
  return X / denom * (-W * cosb + std::sqrt(speed * speed - W2 * sin2b));
}

double discrete_lagrangian(const Point& q0, const Point& q1, double h, double speed,
                           const Field& field, double margin) {
  const Vec2 u{(q1.x1 - q0.x1) / h, (q1.x2 - q0.x2) / h};
  const double l0 = lagrangian_hat(q0, u, speed, field, margin);
  const double l1 = lagrangian_hat(q1, u, speed, field, margin);
  return 0.5 * h * (l0 * l0 + l1 * l1);
}

double discrete_action(const DiscreteRoute& route, double speed, const Field& field,
                       double margin) {
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < route.points.size(); ++k)
    total += discrete_lagrangian(route.points[k], route.points[k + 1], route.h, speed, field,
                                 margin);
  return total;
}

namespace {

// L_d(q_{k-1}, q) + L_d(q, q_{k+1}) as a function of the middle point.
struct MidpointObjective {
  const Point& prev;
  const Point& next;
  double h;
  double speed;
  const Field& field;
  double margin;

  double operator()(const Point& q) const {
    return discrete_lagrangian(prev, q, h, speed, field, margin) +
           discrete_lagrangian(q, next, h, speed, field, margin);
  }
};

double fd_step_for(const Point& q, double rel) {
  return rel * std::max(1.0, std::hypot(q.x1, q.x2));
}

template <typename Fn>
void for_indices(std::size_t begin, std::size_t end, int threads, Fn&& fn) {
  const std::size_t count = end - begin;
  if (threads <= 1 || count <= 1) {
    for (std::size_t k = begin; k < end; ++k) fn(k);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t k = begin + w; k < end; k += workers) fn(k);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

Vec2 del_residual(const DiscreteRoute& route, std::size_t k, double speed, const Field& field,
                  const SmoothingConfig& cfg) {
  if (k < 1 || k + 1 >= route.points.size())
    throw ConfigError("del_residual: k must index an interior point");
  const double margin = cfg.resolved_margin(speed);
  const Point& q = route.points[k];
  const MidpointObjective G{route.points[k - 1], route.points[k + 1],
                            route.h,            speed,
                            field,              margin};
  const double h = fd_step_for(q, cfg.fd_step);
  return {(G({q.x1 + h, q.x2}) - G({q.x1 - h, q.x2})) / (2.0 * h),
          (G({q.x1, q.x2 + h}) - G({q.x1, q.x2 - h})) / (2.0 * h)};
}

DiscreteRoute newton_jacobi_sweep(const DiscreteRoute& route, double speed, const Field& field,
                                  const SmoothingConfig& cfg) {
  const std::size_t n = route.points.size();
  if (n < 3) return route;
  const double margin = cfg.resolved_margin(speed);
  DiscreteRoute next = route;

  for_indices(1, n - 1, cfg.threads, [&](std::size_t k) {
    const Point& q = route.points[k];
    const MidpointObjective G{route.points[k - 1], route.points[k + 1],
                              route.h,            speed,
                              field,              margin};
    const double h = fd_step_for(q, cfg.fd_step);

    const double g0 = G(q);
    const double gpx = G({q.x1 + h, q.x2});
    const double gmx = G({q.x1 - h, q.x2});
    const double gpy = G({q.x1, q.x2 + h});
    const double gmy = G({q.x1, q.x2 - h});
    const double gpp = G({q.x1 + h, q.x2 + h});
    const double gpm = G({q.x1 + h, q.x2 - h});
    const double gmp = G({q.x1 - h, q.x2 + h});
    const double gmm = G({q.x1 - h, q.x2 - h});

    const double f1 = (gpx - gmx) / (2.0 * h);
    const double f2 = (gpy - gmy) / (2.0 * h);
    const double a11 = (gpx - 2.0 * g0 + gmx) / (h * h);
    const double a22 = (gpy - 2.0 * g0 + gmy) / (h * h);
    const double a12 = (gpp - gpm - gmp + gmm) / (4.0 * h * h);

    const double det = a11 * a22 - a12 * a12;
    if (std::abs(det) < 1e-12)
      throw SingularHessianError(k, "newton_jacobi_sweep: singular 2x2 system at point " +
                                        std::to_string(k));
    // Solve (A) delta = -F
    const double dx = -(a22 * f1 - a12 * f2) / det;
    const double dy = -(a11 * f2 - a12 * f1) / det;
    next.points[k] = {q.x1 + dx, q.x2 + dy};
  });
  return next;
}

SmoothResult smooth(const DiscreteRoute& route, const SmoothingConfig& cfg, double speed,
                    const Field& field) {
  if (cfg.iterations < 0) throw ConfigError("smooth: iterations must be nonnegative");
  if (!(cfg.fd_step > 0.0)) throw ConfigError("smooth: fd_step must be positive");
  const double margin = cfg.resolved_margin(speed);

  SmoothResult res{route, {}};
  res.action_trace.reserve(static_cast<std::size_t>(cfg.iterations) + 1);
  res.action_trace.push_back(discrete_action(res.route, speed, field, margin));

  for (int it = 0; it < cfg.iterations; ++it) {
    DiscreteRoute swept;
    try {
      swept = newton_jacobi_sweep(res.route, speed, field, cfg);
    } catch (const Error& e) {
      throw SteppedError(static_cast<std::size_t>(it), std::current_exception(),
                         "smooth: iteration " + std::to_string(it) + ": " + e.what());
    }
    double max_disp = 0.0;
    for (std::size_t k = 1; k + 1 < swept.points.size(); ++k) {
      max_disp = std::max(max_disp, std::hypot(swept.points[k].x1 - res.route.points[k].x1,
                                               swept.points[k].x2 - res.route.points[k].x2));
    }
    res.route = std::move(swept);
    res.action_trace.push_back(discrete_action(res.route, speed, field, margin));
    if (max_disp < 1e-12) break;
  }
  return res;
}

DiscreteRoute resample_by_time(const Route& route, int segments, const Space& space) {
  if (segments < 2) throw ConfigError("resample_by_time: need at least 2 segments");
  const std::vector<TrajectoryState> states = route.flatten();
  if (states.size() < 2)
    throw ConfigError("resample_by_time: route has fewer than 2 distinct states");
  const double t0 = states.front().t;
  const double total = states.back().t - t0;
  if (!(total > 0.0)) throw ConfigError("resample_by_time: route spans no time");

  DiscreteRoute out;
  out.space = space;
  out.h = total / segments;
  out.points.reserve(static_cast<std::size_t>(segments) + 1);
  std::size_t seg = 0;
  for (int j = 0; j <= segments; ++j) {
    const double tj = t0 + total * static_cast<double>(j) / segments;
    while (seg + 2 < states.size() && states[seg + 1].t < tj) ++seg;
    const TrajectoryState& a = states[seg];
    const TrajectoryState& b = states[seg + 1];
    const double f = std::clamp((tj - a.t) / (b.t - a.t), 0.0, 1.0);
    out.points.push_back({a.pos.x1 + f * (b.pos.x1 - a.pos.x1),
                          a.pos.x2 + f * (b.pos.x2 - a.pos.x2)});
  }
  out.points.front() = states.front().pos;
  out.points.back() = states.back().pos;
  return out;
}

namespace {

// A field re-expressed in locally scaled coordinates; current components are
// frame-invariant (east-north both ways).
class LocallyScaledField final : public Field {
 public:
  LocallyScaledField(const Field& base, double sx, double sy) : base_(base), sx_(sx), sy_(sy) {}

  FieldSample sample(const Point& p) const override {
    return base_.sample({p.x1 / sx_, p.x2 / sy_});
  }
  FieldJacobian jacobian(const Point& p) const override {
    FieldJacobian J = base_.jacobian({p.x1 / sx_, p.x2 / sy_});
    J.w11 /= sx_;
    J.w21 /= sx_;
    J.w12 /= sy_;
    J.w22 /= sy_;
    return J;
  }
  bool is_land(const Point& p) const override { return base_.is_land({p.x1 / sx_, p.x2 / sy_}); }
  bool in_domain(const Point& p) const override {
    return base_.in_domain({p.x1 / sx_, p.x2 / sy_});
  }

 private:
  const Field& base_;
  double sx_, sy_;
};

}  // namespace

SmoothResult smooth_spherical(const DiscreteRoute& route, const SmoothingConfig& cfg, double speed,
                              const Field& field) {
  if (!route.space.is_spherical())
    throw ConfigError("smooth_spherical: route is not spherical");
  const SphereParams& sp = route.space.sphere();

  double mean_lat = 0.0;
  for (const Point& p : route.points) mean_lat += p.x2;
  mean_lat /= static_cast<double>(route.points.size());

  const double sy = sp.K_m();
  const double sx = sp.K_m() * std::cos(sp.kappa * mean_lat);
  const LocallyScaledField scaled(field, sx, sy);

  DiscreteRoute planar{{}, route.h, Space::euclidean()};
  planar.points.reserve(route.points.size());
  for (const Point& p : route.points) planar.points.push_back({p.x1 * sx, p.x2 * sy});

  SmoothResult res = smooth(planar, cfg, speed, scaled);

  SmoothResult out{DiscreteRoute{{}, route.h, route.space}, std::move(res.action_trace)};
  out.route.points.reserve(res.route.points.size());
  for (const Point& p : res.route.points) out.route.points.push_back({p.x1 / sx, p.x2 / sy});
  out.route.points.front() = route.points.front();
  out.route.points.back() = route.points.back();
  return out;
}

}  // namespace zermelo
