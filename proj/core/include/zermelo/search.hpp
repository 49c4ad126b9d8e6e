#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "zermelo/dynamics.hpp"
#include "zermelo/field.hpp"
#include "zermelo/geometry.hpp"

namespace zermelo {

/// Parameters of the cone-shooting search.
struct HSConfig {
  double speed = 1.0;                // V, speed over water
  int fan_size = 21;                 // N trajectories per cone
  double cone = kPi;                 // gamma: exploration cone amplitude (rad)
  double max_deviation = kPi / 2.0;  // gamma_d: allowed heading gap to the goal bearing
  double refine_cone = kPi / 5.0;    // gamma_b: refinement cone amplitude
  double dt = 0.01;                  // RK4 step
  double tau = 0.1;                  // checkpoint interval, integer multiple of dt
  double goal_radius = 0.1;          // d: arrival distance threshold
  int max_outer = 200;               // guard on exploration<->refinement alternations
  long max_leg_iters = 100000;       // guard on checkpoints within one phase
  int threads = 1;                   // fan workers; results are thread-count independent

  /// Defaults for real-scale spherical runs (m/s speeds, km distances).
  static HSConfig spherical_defaults();

  /// Throws ConfigError on invariant violations; returns non-fatal warnings
  /// (the refinement cone wider than the exploration spacing is worked with
  /// deliberately and only warned about).
  std::vector<std::string> validate() const;
};

enum class TrajectoryStatus { Active, ReachedGoal, Deviated, HitLand };

/// One shot trajectory out of a fan, with the stopping outcome.
/// HitLand trajectories are truncated strictly before the first land point.
struct ShotTrajectory {
  std::vector<TrajectoryState> states;
  TrajectoryStatus status = TrajectoryStatus::Active;
  int shoot_index = 0;

  const TrajectoryState& back() const { return states.back(); }
  const TrajectoryState& front() const { return states.front(); }
};

/// Chain of winning legs connecting departure and goal. Consecutive legs
/// share their junction point; headings may jump there.
struct Route {
  std::vector<ShotTrajectory> legs;
  double total_time = 0.0;
  bool reached = false;

  std::vector<TrajectoryState> flatten() const;  // junction states deduplicated
};

/// N initial headings evenly spread across [center - amplitude/2,
/// center + amplitude/2], endpoints inclusive, each wrapped to (-pi, pi].
/// A full-circle amplitude drops the duplicated -pi endpoint.
std::vector<double> shoot_fan(double center_angle, double amplitude, int n);

struct StopCheck {
  TrajectoryStatus status = TrajectoryStatus::Active;
  std::size_t truncate_to = 0;  // retained state count when status == HitLand
};

/// Apply the three stopping rules to a trajectory at a checkpoint, scanning
/// states[scan_from..] for land. Rule priority: reached > land > deviated.
/// The deviation window is boundary-inclusive.
StopCheck stop_check(const ShotTrajectory& traj, std::size_t scan_from, const Point& goal,
                     const HSConfig& cfg, const Field& field, const Space& space);

struct PhaseResult {
  ShotTrajectory winner;
  long end_iter = 0;
};

/// Shoot a fan of cfg.fan_size trajectories from `start` across `amplitude`
/// around `center_angle` and evolve them in lockstep checkpoints of tau
/// until all stop. Returns the winner: any goal-reaching trajectory
/// (earliest arrival, then lowest shoot index), otherwise the trajectory
/// closest to the goal at its final retained state.
PhaseResult explore(const Point& start, double start_time, const Point& goal, double center_angle,
                    double amplitude, long start_iter, const HSConfig& cfg, const Field& field,
                    const Space& space);

/// Exploration machinery re-run with a narrow cone centred on the winner's
/// initial shooting angle, from the winner's starting point. Keeps whichever
/// of (refined winner, incumbent) ranks better.
PhaseResult refine(const ShotTrajectory& winner, const Point& goal, long start_iter,
                   const HSConfig& cfg, const Field& field, const Space& space);

/// Alternate explore -> refine, chaining each refined winner's endpoint into
/// a new exploration, until a trajectory reaches within goal_radius of the
/// goal or max_outer alternations pass (Route.reached = false then).
Route hybrid_search(const Point& start, const Point& goal, const HSConfig& cfg, const Field& field,
                    const Space& space);

}  // namespace zermelo
