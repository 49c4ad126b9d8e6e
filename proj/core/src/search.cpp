#include "zermelo/search.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace zermelo {

HSConfig HSConfig::spherical_defaults() {
  HSConfig cfg;
  cfg.speed = 6.0;         // m/s
  cfg.dt = 600.0;          // s
  cfg.tau = 7200.0;        // s
  cfg.goal_radius = 10.0;  // km
  return cfg;
}

std::vector<std::string> HSConfig::validate() const {
  if (!(speed > 0.0)) throw ConfigError("config: speed must be positive");
  if (fan_size < 2) throw ConfigError("config: fan_size must be at least 2");
  if (!(refine_cone > 0.0) || refine_cone > cone || cone > 2.0 * kPi)
    throw ConfigError("config: need 0 < refine_cone <= cone <= 2*pi");
  if (max_deviation > cone) throw ConfigError("config: max_deviation must not exceed cone");
  if (!(dt > 0.0)) throw ConfigError("config: dt must be positive");
  if (tau < dt) throw ConfigError("config: tau must be at least dt");
  const double ratio = tau / dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio)
    throw ConfigError("config: tau must be an integer multiple of dt");
  if (!(goal_radius > 0.0)) throw ConfigError("config: goal_radius must be positive");
  if (max_outer < 1) throw ConfigError("config: max_outer must be at least 1");
  if (max_leg_iters < 1) throw ConfigError("config: max_leg_iters must be at least 1");
  if (threads < 1) throw ConfigError("config: threads must be at least 1");

  std::vector<std::string> warnings;
  const double spacing = 2.0 * cone / (fan_size - 1);
  if (refine_cone > spacing) {
    warnings.push_back(
        "refine_cone exceeds twice the exploration fan spacing; the refined fan "
        "reaches beyond the neighbouring exploration directions");
  }
  return warnings;
}

std::vector<TrajectoryState> Route::flatten() const {
  std::vector<TrajectoryState> out;
  for (const ShotTrajectory& leg : legs) {
    for (const TrajectoryState& s : leg.states) {
      if (!out.empty() && s.t <= out.back().t) continue;  // junction duplicate
      out.push_back(s);
    }
  }
  return out;
}

std::vector<double> shoot_fan(double center_angle, double amplitude, int n) {
  if (n < 2) throw ConfigError("shoot_fan: need at least 2 headings");
  std::vector<double> headings;
  headings.reserve(static_cast<std::size_t>(n));
  const bool full_circle = amplitude >= 2.0 * kPi - 1e-12;
  if (full_circle) {
    // Both cone edges point the same way; keep the +pi edge only.
    const double step = 2.0 * kPi / n;
    for (int k = 1; k <= n; ++k)
      headings.push_back(wrap_angle(center_angle - kPi + k * step));
  } else {
    const double step = amplitude / (n - 1);
    for (int k = 0; k < n; ++k)
      headings.push_back(wrap_angle(center_angle - 0.5 * amplitude + k * step));
  }
  return headings;
}

StopCheck stop_check(const ShotTrajectory& traj, std::size_t scan_from, const Point& goal,
                     const HSConfig& cfg, const Field& field, const Space& space) {
  const TrajectoryState& last = traj.states.back();

  // Rule 1: arrived.
  if (distance(space, last.pos, goal) <= cfg.goal_radius)
    return {TrajectoryStatus::ReachedGoal, 0};

  // Rule 3: touched land since the previous check. Everything from the
  // first land point on is discarded; the part before may still be useful.
  for (std::size_t k = scan_from; k < traj.states.size(); ++k) {
    if (field.is_land(traj.states[k].pos)) return {TrajectoryStatus::HitLand, k};
  }

  // Rule 2: heading drifted outside the allowed window around the goal
  // bearing. The window is boundary-inclusive; the comparison uses the
  // wrapped signed difference so the +-pi seam behaves.
  const double to_goal = bearing(space, last.pos, goal);
  const double gap = wrap_angle(last.alpha - to_goal);
  if (gap < -0.5 * cfg.max_deviation || gap > 0.5 * cfg.max_deviation)
    return {TrajectoryStatus::Deviated, 0};

  return {TrajectoryStatus::Active, 0};
}

namespace {

// Advance one trajectory by a checkpoint interval, retaining whatever was
// integrated if the field domain ends mid-leg.
struct CheckpointAdvance {
  bool domain_exit = false;
};

CheckpointAdvance advance_checkpoint(ShotTrajectory& traj, const HSConfig& cfg,
                                     const SpaceRhs& rhs) {
  const auto steps = static_cast<std::size_t>(std::llround(cfg.tau / cfg.dt));
  CheckpointAdvance res;
  for (std::size_t i = 0; i < steps; ++i) {
    try {
      traj.states.push_back(rk4_step(traj.states.back(), cfg.dt, rhs));
    } catch (const OutOfDomainError&) {
      res.domain_exit = true;
      break;
    } catch (const PoleSingularityError&) {
      res.domain_exit = true;
      break;
    } catch (const AllLandCellError&) {
      res.domain_exit = true;
      break;
    }
  }
  return res;
}

// Run fn(n) for all n in [0, count), split over cfg.threads workers. The
// work per index is independent, so the thread count cannot change results.
template <typename Fn>
void for_fan(std::size_t count, int threads, Fn&& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t n = 0; n < count; ++n) fn(n);
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
        for (std::size_t n = w; n < count; n += workers) fn(n);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

// Ranking shared by exploration and refinement: goal-reaching trajectories
// first (earliest arrival), then smallest final distance to goal; ties go
// to the lowest shoot index.
bool better(const ShotTrajectory& a, double dist_a, const ShotTrajectory& b, double dist_b) {
  const bool ra = a.status == TrajectoryStatus::ReachedGoal;
  const bool rb = b.status == TrajectoryStatus::ReachedGoal;
  if (ra != rb) return ra;
  if (ra && rb) {
    if (a.back().t != b.back().t) return a.back().t < b.back().t;
    return a.shoot_index < b.shoot_index;
  }
  if (dist_a != dist_b) return dist_a < dist_b;
  return a.shoot_index < b.shoot_index;
}

PhaseResult run_phase(const Point& start, double start_time, const Point& goal,
                      double center_angle, double amplitude, long start_iter, const HSConfig& cfg,
                      const Field& field, const Space& space) {
  const std::vector<double> headings = shoot_fan(center_angle, amplitude, cfg.fan_size);
  const std::size_t n_traj = headings.size();
  const SpaceRhs rhs(space, cfg.speed, field);

  std::vector<ShotTrajectory> fan(n_traj);
  for (std::size_t n = 0; n < n_traj; ++n) {
    fan[n].states.push_back({start, headings[n], start_time});
    fan[n].shoot_index = static_cast<int>(n);
  }

  std::vector<std::size_t> scan_from(n_traj, 1);
  std::vector<CheckpointAdvance> advances(n_traj);
  long iter = start_iter;
  long last_stop_iter = start_iter;
  std::size_t active = n_traj;

  while (active > 0) {
    if (iter - start_iter >= cfg.max_leg_iters) {
      // Phase guard tripped; freeze whatever is still running.
      for (ShotTrajectory& traj : fan)
        if (traj.status == TrajectoryStatus::Active) traj.status = TrajectoryStatus::Deviated;
      last_stop_iter = iter;
      break;
    }
    for (std::size_t n = 0; n < n_traj; ++n) scan_from[n] = fan[n].states.size();
    for_fan(n_traj, cfg.threads, [&](std::size_t n) {
      if (fan[n].status != TrajectoryStatus::Active) return;
      advances[n] = advance_checkpoint(fan[n], cfg, rhs);
    });
    for (std::size_t n = 0; n < n_traj; ++n) {
      ShotTrajectory& traj = fan[n];
      if (traj.status != TrajectoryStatus::Active) continue;
      StopCheck sc = stop_check(traj, scan_from[n], goal, cfg, field, space);
      if (sc.status == TrajectoryStatus::HitLand)
        traj.states.resize(std::max<std::size_t>(sc.truncate_to, 0));
      if (sc.status == TrajectoryStatus::Active && advances[n].domain_exit)
        sc.status = TrajectoryStatus::HitLand;  // ran off the navigable domain
      if (sc.status != TrajectoryStatus::Active) {
        traj.status = sc.status;
        --active;
        last_stop_iter = iter;
      }
    }
    ++iter;
  }

  const bool all_dead = std::all_of(fan.begin(), fan.end(), [](const ShotTrajectory& traj) {
    return traj.status == TrajectoryStatus::HitLand && traj.states.size() <= 1;
  });
  if (all_dead)
    throw AllTrajectoriesDeadError("search phase: every trajectory died on land immediately");

  const ShotTrajectory* best = nullptr;
  double best_dist = 0.0;
  for (const ShotTrajectory& traj : fan) {
    if (traj.states.empty()) continue;
    const double d = distance(space, traj.back().pos, goal);
    if (!best || better(traj, d, *best, best_dist)) {
      best = &traj;
      best_dist = d;
    }
  }
  return {*best, last_stop_iter};
}

}  // namespace

PhaseResult explore(const Point& start, double start_time, const Point& goal, double center_angle,
                    double amplitude, long start_iter, const HSConfig& cfg, const Field& field,
                    const Space& space) {
  return run_phase(start, start_time, goal, center_angle, amplitude, start_iter, cfg, field,
                   space);
}

PhaseResult refine(const ShotTrajectory& winner, const Point& goal, long start_iter,
                   const HSConfig& cfg, const Field& field, const Space& space) {
  const TrajectoryState& origin = winner.front();
  PhaseResult res =
      run_phase(origin.pos, origin.t, goal, origin.alpha, cfg.refine_cone, start_iter, cfg, field,
                space);
  // A narrow fan can do worse than its seed; keep the better of the two.
  const double d_new = distance(space, res.winner.back().pos, goal);
  const double d_old = distance(space, winner.back().pos, goal);
  if (better(winner, d_old, res.winner, d_new)) res.winner = winner;
  return res;
}

Route hybrid_search(const Point& start, const Point& goal, const HSConfig& cfg, const Field& field,
                    const Space& space) {
  cfg.validate();
  if (field.is_land(start)) throw LandStartError("hybrid_search: start point is on land");
  if (field.is_land(goal)) throw LandGoalError("hybrid_search: goal point is on land");

  Route route;
  if (distance(space, start, goal) <= cfg.goal_radius) {
    route.legs.push_back({{{start, 0.0, 0.0}}, TrajectoryStatus::ReachedGoal, 0});
    route.reached = true;
    return route;
  }

  Point from = start;
  double t = 0.0;
  long iter = 1;
  for (int outer = 0; outer < cfg.max_outer; ++outer) {
    const double center = bearing(space, from, goal);
    PhaseResult exp = explore(from, t, goal, center, cfg.cone, iter, cfg, field, space);
    if (exp.winner.status == TrajectoryStatus::ReachedGoal) {
      route.legs.push_back(std::move(exp.winner));
      route.reached = true;
      break;
    }
    PhaseResult ref = refine(exp.winner, goal, iter, cfg, field, space);
    route.legs.push_back(ref.winner);
    if (ref.winner.status == TrajectoryStatus::ReachedGoal) {
      route.reached = true;
      break;
    }
    from = ref.winner.back().pos;
    t = ref.winner.back().t;
    iter = ref.end_iter;
  }
  route.total_time = route.legs.empty() ? 0.0 : route.legs.back().back().t;
  return route;
}

}  // namespace zermelo
