// Copyright 2026 The GORM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gorm/planner.hpp"
#include "gorm/rng.hpp"

namespace gorm {

/// Kinematic base state: planar pose plus the height/pitch degrees of
/// freedom. Roll is identically zero for this platform.
struct BaseState {
  double x = 0.0;
  double y = 0.0;
  double yaw = 0.0;
  double height = 0.0;
  double pitch = 0.0;
};

inline Pose base_pose(const BaseState& s) {
  Eigen::Quaterniond rot =
      Eigen::Quaterniond(Eigen::AngleAxisd(s.yaw, Eigen::Vector3d::UnitZ())) *
      Eigen::Quaterniond(Eigen::AngleAxisd(s.pitch, Eigen::Vector3d::UnitY()));
  return Pose({s.x, s.y, s.height}, rot);
}

/// First-order kinematic step: planar velocities integrate in the body yaw
/// frame, height and pitch slew toward their setpoints at bounded rates.
inline BaseState step_base(const BaseState& s, const Command5D& cmd, double dt,
                           double h_rate = 0.2, double theta_rate = 0.5) {
  if (!(dt > 0)) throw std::invalid_argument("step_base: dt must be > 0");
  if (!(h_rate > 0) || !(theta_rate > 0)) {
    throw std::invalid_argument("step_base: slew rates must be > 0");
  }
  BaseState out = s;
  const double c = std::cos(s.yaw), sn = std::sin(s.yaw);
  out.x += dt * (c * cmd.vx - sn * cmd.vy);
  out.y += dt * (sn * cmd.vx + c * cmd.vy);
  out.yaw = wrap_to_pi(s.yaw + dt * cmd.omega);
  const double dh = std::clamp(cmd.height - s.height, -h_rate * dt, h_rate * dt);
  const double dp = std::clamp(cmd.pitch - s.pitch, -theta_rate * dt, theta_rate * dt);
  out.height += dh;
  out.pitch += dp;
  return out;
}

/// Randomized approach episode: a task pose near the origin, a spawn ring
/// around it, and a step budget.
struct Scenario {
  std::uint64_t seed = 1;
  double target_height = 0.75;       // m
  double target_xy_range = 0.5;      // target x, y uniform in +-range
  double target_yaw_range = M_PI;    // roll about the approach axis, +-range
  double approach_cone = 0.5235987755982988;  // 30 deg around straight down
  double spawn_radius_min = 1.0;
  double spawn_radius_max = 2.0;
  int max_steps = 150;
  double dt = 0.1;
  double h_rate = 0.2;
  double theta_rate = 0.5;

  void validate() const {
    if (!(target_xy_range >= 0) || !(target_yaw_range >= 0)) {
      throw std::invalid_argument("scenario: ranges must be >= 0");
    }
    if (!(approach_cone >= 0 && approach_cone < M_PI)) {
      throw std::invalid_argument("scenario: approach_cone must be in [0, pi)");
    }
    if (!(spawn_radius_min >= 0) || !(spawn_radius_max >= spawn_radius_min)) {
      throw std::invalid_argument("scenario: spawn radii must be ordered and >= 0");
    }
    if (max_steps < 1) throw std::invalid_argument("scenario: max_steps must be >= 1");
    if (!(dt > 0)) throw std::invalid_argument("scenario: dt must be > 0");
    if (!(h_rate > 0) || !(theta_rate > 0)) {
      throw std::invalid_argument("scenario: slew rates must be > 0");
    }
  }
};

enum class EpisodeOutcome { Switched, TimedOut, Empty };

struct EpisodeResult {
  EpisodeOutcome outcome = EpisodeOutcome::TimedOut;
  int steps = 0;  // motion steps taken before the outcome
  BaseState final_state{};
  Pose target{};
  double final_reachability = 0.0;
  std::vector<double> dmin_trace;  // nearest-candidate distance per planned step
};

namespace detail {

/// Draw order is fixed (target first, then spawn) so both benchmark modes
/// see identical scenes for the same seed.
inline void sample_scene(Rng& rng, const Scenario& sc, Pose& target, BaseState& spawn,
                         double nominal_height) {
  const double tx = rng.uniform(-sc.target_xy_range, sc.target_xy_range);
  const double ty = rng.uniform(-sc.target_xy_range, sc.target_xy_range);
  // Approach direction in a cone around straight down: uniform over the cap.
  const double cos_cap = std::cos(sc.approach_cone);
  const double cz = rng.uniform(cos_cap, 1.0);
  const double az = rng.uniform(0.0, 2.0 * M_PI);
  const double sz = std::sqrt(std::max(0.0, 1.0 - cz * cz));
  Eigen::Vector3d dir(sz * std::cos(az), sz * std::sin(az), -cz);
  const double roll = rng.uniform(-sc.target_yaw_range, sc.target_yaw_range);
  Eigen::Quaterniond q =
      Eigen::Quaterniond::FromTwoVectors(Eigen::Vector3d::UnitZ(), dir) *
      Eigen::Quaterniond(Eigen::AngleAxisd(roll, Eigen::Vector3d::UnitZ()));
  target = Pose({tx, ty, sc.target_height}, q);

  const double radius = rng.uniform(sc.spawn_radius_min, sc.spawn_radius_max);
  const double angle = rng.uniform(0.0, 2.0 * M_PI);
  spawn = BaseState{tx + radius * std::cos(angle), ty + radius * std::sin(angle),
                    rng.uniform(-M_PI, M_PI), nominal_height, 0.0};
}

}  // namespace detail

/// Runs one approach episode: sample the scene (unless forced), build the
/// candidate distribution once, then alternate plan_step / step_base until
/// the planner raises the switch, the distribution is empty, or the step
/// budget runs out.
inline EpisodeResult run_episode(const ArmModel& arm, const ReachabilityMap& rm,
                                 const std::vector<OrmEntry>& orm,
                                 const LocomotionLimits& limits_in,
                                 const Environment& env, const PlannerParams& params,
                                 const Scenario& scenario,
                                 const std::optional<Pose>& forced_target = {},
                                 const std::optional<BaseState>& forced_spawn = {}) {
  scenario.validate();
  params.validate();

  const double nominal_height = 0.5 * (limits_in.height_min + limits_in.height_max);
  Pose target;
  BaseState base;
  if (forced_target && forced_spawn) {
    target = *forced_target;
    base = *forced_spawn;
  } else {
    Rng rng(scenario.seed);
    detail::sample_scene(rng, scenario, target, base, nominal_height);
    if (forced_target) target = *forced_target;
    if (forced_spawn) base = *forced_spawn;
  }

  LocomotionLimits limits = limits_in;
  limits.planar_origin = Eigen::Vector2d(base.x, base.y);

  std::optional<GormDistribution> dist =
      build_gorm(orm, target, limits, env, params.reach_threshold);

  EpisodeResult result;
  result.target = target;
  PlannerState state;
  int step = 0;
  for (; step < scenario.max_steps; ++step) {
    PlanDiagnostics diag;
    PlanResult res = plan_step(params, limits, state, base_pose(base), target, dist,
                               rm, arm.mount, &diag);
    if (std::holds_alternative<EmptyDistribution>(res)) {
      result.outcome = EpisodeOutcome::Empty;
      break;
    }
    if (std::holds_alternative<SwitchToGrasp>(res)) {
      result.outcome = EpisodeOutcome::Switched;
      break;
    }
    result.dmin_trace.push_back(diag.d_min);
    base = step_base(base, std::get<Command5D>(res), scenario.dt, scenario.h_rate,
                     scenario.theta_rate);
  }
  result.steps = step;
  result.final_state = base;
  result.final_reachability = target_reachability(rm, arm.mount, base_pose(base), target);
  return result;
}

enum class BenchMode { Gorm, Naive };

inline const char* bench_mode_name(BenchMode m) {
  return m == BenchMode::Gorm ? "gorm" : "naive";
}

/// Heuristic baseline for the same scene: drive to a fixed standoff behind
/// the target (on the spawn side), face it, hold nominal height and level
/// pitch, and apply the same switch test each step.
inline EpisodeResult run_naive_episode(const ArmModel& arm, const ReachabilityMap& rm,
                                       const LocomotionLimits& limits_in,
                                       const PlannerParams& params,
                                       const Scenario& scenario, double standoff,
                                       const std::optional<Pose>& forced_target = {},
                                       const std::optional<BaseState>& forced_spawn = {}) {
  scenario.validate();
  params.validate();

  const double nominal_height = 0.5 * (limits_in.height_min + limits_in.height_max);
  const double nominal_pitch = 0.5 * (limits_in.pitch_min + limits_in.pitch_max);
  Pose target;
  BaseState base;
  if (forced_target && forced_spawn) {
    target = *forced_target;
    base = *forced_spawn;
  } else {
    Rng rng(scenario.seed);
    detail::sample_scene(rng, scenario, target, base, nominal_height);
    if (forced_target) target = *forced_target;
    if (forced_spawn) base = *forced_spawn;
  }

  const double psi = std::atan2(target.translation.y() - base.y,
                                target.translation.x() - base.x);
  const Eigen::Vector2d goal_xy =
      target.translation.head<2>() - standoff * Eigen::Vector2d(std::cos(psi), std::sin(psi));

  EpisodeResult result;
  result.target = target;
  int step = 0;
  for (; step < scenario.max_steps; ++step) {
    double reach = target_reachability(rm, arm.mount, base_pose(base), target);
    if (reach >= params.switch_threshold + params.switch_hysteresis) {
      result.outcome = EpisodeOutcome::Switched;
      break;
    }
    const double c = std::cos(base.yaw), s = std::sin(base.yaw);
    const Eigen::Vector2d e_xy = goal_xy - Eigen::Vector2d(base.x, base.y);
    Command5D raw;
    raw.vx = params.kp_lin * (c * e_xy.x() + s * e_xy.y());
    raw.vy = params.kp_lin * (-s * e_xy.x() + c * e_xy.y());
    raw.omega = params.kp_yaw * wrap_to_pi(psi - base.yaw);
    raw.height = nominal_height;
    raw.pitch = nominal_pitch;
    base = step_base(base, clamp_command(raw, limits_in, params.speed), scenario.dt,
                     scenario.h_rate, scenario.theta_rate);
  }
  result.steps = step;
  result.final_state = base;
  result.final_reachability = target_reachability(rm, arm.mount, base_pose(base), target);
  return result;
}

struct BenchRow {
  double height = 0.0;
  std::string mode;
  int trials = 0;
  double mean_reachability = 0.0;
  double switch_rate = 0.0;
  double mean_steps = 0.0;
};

/// Paired benchmark over task heights: lane l, trial t runs with seed
/// derive_seed(base, l, t) in both modes, so the two modes face identical
/// scenes. Episodes that never switch count max_steps toward mean_steps.
inline std::vector<BenchRow> run_benchmark(const ArmModel& arm, const ReachabilityMap& rm,
                                           const std::vector<OrmEntry>& orm,
                                           const LocomotionLimits& limits,
                                           const Environment& env,
                                           const PlannerParams& params,
                                           const Scenario& scenario_base,
                                           const std::vector<double>& heights, int trials,
                                           BenchMode mode, double naive_standoff = 0.5) {
  if (trials < 1) throw std::invalid_argument("bench: trials must be >= 1");
  std::vector<BenchRow> rows;
  rows.reserve(heights.size());
  for (std::size_t lane = 0; lane < heights.size(); ++lane) {
    BenchRow row;
    row.height = heights[lane];
    row.mode = bench_mode_name(mode);
    row.trials = trials;
    double sum_reach = 0.0, sum_steps = 0.0;
    int switched = 0;
    for (int t = 0; t < trials; ++t) {
      Scenario sc = scenario_base;
      sc.seed = derive_seed(scenario_base.seed, lane, static_cast<std::uint64_t>(t));
      sc.target_height = heights[lane];
      EpisodeResult ep =
          mode == BenchMode::Gorm
              ? run_episode(arm, rm, orm, limits, env, params, sc)
              : run_naive_episode(arm, rm, limits, params, sc, naive_standoff);
      sum_reach += ep.final_reachability;
      if (ep.outcome == EpisodeOutcome::Switched) {
        ++switched;
        sum_steps += ep.steps;
      } else {
        sum_steps += sc.max_steps;
      }
    }
    row.mean_reachability = sum_reach / trials;
    row.switch_rate = static_cast<double>(switched) / trials;
    row.mean_steps = sum_steps / trials;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace gorm
