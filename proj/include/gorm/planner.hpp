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

#include <limits>
#include <optional>
#include <stdexcept>
#include <variant>

#include "gorm/command.hpp"
#include "gorm/gorm.hpp"
#include "gorm/rmap.hpp"

namespace gorm {

struct PlannerParams {
  double kp_lin = 1.0;               // planar proportional gain, 1/s
  double kp_yaw = 1.5;               // yaw proportional gain, 1/s
  double lambda = 1.0;               // rotation weight in pose_distance, m/rad
  double switch_threshold = 0.5;     // reachability level that ends the approach
  double switch_hysteresis = 0.05;   // extra margin required above the threshold
  double candidate_stickiness = 0.1; // distance a rival must win by to retarget
  double reach_threshold = 0.3;      // candidate score cut at distribution build
  SpeedCaps speed{};

  void validate() const {
    if (!(kp_lin > 0 && kp_yaw > 0)) {
      throw std::invalid_argument("planner: gains must be > 0");
    }
    if (!(lambda >= 0)) throw std::invalid_argument("planner: lambda must be >= 0");
    if (!(switch_hysteresis >= 0)) {
      throw std::invalid_argument("planner: switch_hysteresis must be >= 0");
    }
    if (!(candidate_stickiness >= 0)) {
      throw std::invalid_argument("planner: candidate_stickiness must be >= 0");
    }
    speed.validate();
  }
};

enum class PlannerPhase { Approaching, Grasping };

/// Mutable planner memory across steps of one approach. `locked` indexes the
/// distribution the planner was stepped with; it is only meaningful while
/// the same distribution object is passed every step.
struct PlannerState {
  PlannerPhase phase = PlannerPhase::Approaching;
  std::optional<std::size_t> locked;
};

struct SwitchToGrasp {};
struct EmptyDistribution {};

using PlanResult = std::variant<Command5D, SwitchToGrasp, EmptyDistribution>;

/// Per-step introspection for logging; not consumed by the planner itself.
struct PlanDiagnostics {
  double d_min = std::numeric_limits<double>::infinity();
  std::size_t nearest = 0;
  double reachability = 0.0;
};

/// Reachability index of the task pose's position as seen from the current
/// base pose: the target is pulled back through the body and mount frames
/// into the map's arm-base frame.
inline double target_reachability(const ReachabilityMap& rm, const Pose& mount,
                                  const Pose& base_world, const Pose& target_world) {
  Pose target_in_arm = (base_world * mount).inverse() * target_world;
  return static_cast<double>(query_index(rm, target_in_arm.translation));
}

/// One planner step during the approach phase.
///
/// Order of business: raise SwitchToGrasp once the target's reachability
/// clears threshold + hysteresis; otherwise pursue a candidate and emit the
/// proportional command toward it. The pursued candidate only changes when
/// the nearest one beats it by more than candidate_stickiness, which stops
/// flip-flopping between near-equal candidates. Stepping a planner already
/// in the grasp phase is a caller bug and throws.
inline PlanResult plan_step(const PlannerParams& params, const LocomotionLimits& limits,
                            PlannerState& state, const Pose& base_world,
                            const Pose& target_world,
                            const std::optional<GormDistribution>& dist,
                            const ReachabilityMap& rm, const Pose& mount,
                            PlanDiagnostics* diag = nullptr) {
  params.validate();
  if (state.phase == PlannerPhase::Grasping) {
    throw std::logic_error("plan_step: planner is already in the grasp phase");
  }

  const double reach = target_reachability(rm, mount, base_world, target_world);
  if (diag) {
    diag->d_min = std::numeric_limits<double>::infinity();
    diag->nearest = 0;
    diag->reachability = reach;
  }
  if (!dist) return EmptyDistribution{};

  if (reach >= params.switch_threshold + params.switch_hysteresis) {
    state.phase = PlannerPhase::Grasping;
    if (diag) {
      NearestCandidate nc = min_distance(*dist, base_world, params.lambda);
      diag->d_min = nc.distance;
      diag->nearest = nc.index;
    }
    return SwitchToGrasp{};
  }

  NearestCandidate nc = min_distance(*dist, base_world, params.lambda);
  if (diag) {
    diag->d_min = nc.distance;
    diag->nearest = nc.index;
  }

  std::size_t pursued = nc.index;
  if (state.locked && *state.locked < dist->size() && *state.locked != nc.index) {
    double d_locked = pose_distance(dist->world_pose(*state.locked), base_world,
                                    params.lambda);
    if (!(nc.distance < d_locked - params.candidate_stickiness)) pursued = *state.locked;
  }
  state.locked = pursued;

  const Pose goal = dist->world_pose(pursued);
  const double yaw = base_world.yaw();
  const Eigen::Vector2d e_xy = goal.translation.head<2>() - base_world.translation.head<2>();
  const double c = std::cos(yaw), s = std::sin(yaw);

  Command5D raw;
  raw.vx = params.kp_lin * (c * e_xy.x() + s * e_xy.y());
  raw.vy = params.kp_lin * (-s * e_xy.x() + c * e_xy.y());
  raw.omega = params.kp_yaw * wrap_to_pi(goal.yaw() - yaw);
  raw.height = goal.translation.z();
  raw.pitch = goal.rpy()[1];
  return clamp_command(raw, limits, params.speed);
}

}  // namespace gorm
