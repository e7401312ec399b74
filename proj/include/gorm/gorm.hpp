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

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gorm/metrics.hpp"
#include "gorm/orm.hpp"
#include "gorm/pose.hpp"

namespace gorm {

struct Aabb {
  Eigen::Vector3d min{Eigen::Vector3d::Zero()};
  Eigen::Vector3d max{Eigen::Vector3d::Zero()};

  Eigen::Vector3d center() const { return 0.5 * (min + max); }
  Eigen::Vector3d half_extents() const { return 0.5 * (max - min); }
};

/// What base poses the platform can actually assume. Height and pitch are
/// closed intervals, roll is a symmetric tolerance around level, and the
/// planar position must stay within `planar_range` of `planar_origin`
/// (infinity disables the planar cut).
struct LocomotionLimits {
  double height_min = 0.3;
  double height_max = 0.65;
  double pitch_min = -0.4;
  double pitch_max = 0.4;
  double roll_tolerance = 0.1;
  Eigen::Vector2d planar_origin{Eigen::Vector2d::Zero()};
  double planar_range = std::numeric_limits<double>::infinity();

  void validate() const {
    if (!(height_min <= height_max)) {
      throw std::invalid_argument("limits: height interval must be ordered");
    }
    if (!(pitch_min <= pitch_max)) {
      throw std::invalid_argument("limits: pitch interval must be ordered");
    }
    if (!(roll_tolerance >= 0)) {
      throw std::invalid_argument("limits: roll_tolerance must be >= 0");
    }
    if (!(planar_range > 0)) {
      throw std::invalid_argument("limits: planar_range must be > 0");
    }
  }
};

/// World obstacles plus the robot's own collision volume (an axis-aligned
/// box in the body frame, re-oriented with the body for the overlap test).
struct Environment {
  double ground_height = 0.0;
  std::vector<Aabb> boxes;
  Aabb robot_body{{-0.5, -0.25, -0.12}, {0.5, 0.25, 0.12}};
};

/// One admissible body placement for the task pose, stored relative to the
/// target frame so the distribution itself is target-independent data.
struct GormCandidate {
  Pose base_in_target;
  double score = 0.0;
};

/// Candidate base placements for one 6-DoF task pose, after the limit,
/// collision, and reachability-threshold cuts. World poses are cached
/// struct-of-arrays for the nearest-candidate scan.
struct GormDistribution {
  Pose target;              // task pose in the world frame
  double reach_threshold = 0.0;
  std::vector<GormCandidate> candidates;

  // World-frame caches, one row per candidate.
  Eigen::Matrix<double, Eigen::Dynamic, 3> world_positions;
  Eigen::Matrix<double, Eigen::Dynamic, 4> world_quats;  // w, x, y, z

  std::size_t size() const { return candidates.size(); }

  Pose world_pose(std::size_t i) const {
    auto k = static_cast<Eigen::Index>(i);
    return Pose(world_positions.row(k).transpose(),
                Eigen::Quaterniond(world_quats(k, 0), world_quats(k, 1),
                                   world_quats(k, 2), world_quats(k, 3)));
  }

  void rebuild_world_cache() {
    auto n = static_cast<Eigen::Index>(candidates.size());
    world_positions.resize(n, 3);
    world_quats.resize(n, 4);
    for (Eigen::Index i = 0; i < n; ++i) {
      Pose w = target * candidates[static_cast<std::size_t>(i)].base_in_target;
      world_positions.row(i) = w.translation.transpose();
      world_quats(i, 0) = w.rotation.w();
      world_quats(i, 1) = w.rotation.x();
      world_quats(i, 2) = w.rotation.y();
      world_quats(i, 3) = w.rotation.z();
    }
  }
};

namespace detail {

inline bool aabb_overlaps(const Aabb& a, const Aabb& b) {
  return a.min.x() < b.max.x() && b.min.x() < a.max.x() &&
         a.min.y() < b.max.y() && b.min.y() < a.max.y() &&
         a.min.z() < b.max.z() && b.min.z() < a.max.z();
}

/// Axis-aligned bound of the body box re-posed by `world`: the rotated box
/// fits inside center +- |R| h, which is tight for axis-aligned content.
inline Aabb body_bounds(const Aabb& body, const Pose& world) {
  Eigen::Matrix3d rot_abs = world.rotation.toRotationMatrix().cwiseAbs();
  Eigen::Vector3d center = world.apply(body.center());
  Eigen::Vector3d half = rot_abs * body.half_extents();
  return Aabb{center - half, center + half};
}

inline bool collides(const Environment& env, const Pose& world) {
  Aabb bounds = body_bounds(env.robot_body, world);
  if (bounds.min.z() < env.ground_height) return true;
  for (const Aabb& box : env.boxes) {
    if (aabb_overlaps(bounds, box)) return true;
  }
  return false;
}

inline bool within_locomotion(const LocomotionLimits& limits, const Pose& world) {
  Eigen::Vector3d rpy = world.rpy();
  if (std::abs(rpy[0]) > limits.roll_tolerance) return false;
  if (rpy[1] < limits.pitch_min || rpy[1] > limits.pitch_max) return false;
  if (world.translation.z() < limits.height_min ||
      world.translation.z() > limits.height_max) {
    return false;
  }
  Eigen::Vector2d planar = world.translation.head<2>() - limits.planar_origin;
  return !(planar.norm() > limits.planar_range);
}

}  // namespace detail

/// Pins the inverted map to a task pose and keeps the candidates that
/// (1) lie within the locomotion limits, (2) do not collide with the ground
/// or the obstacle boxes, and (3) score at least `reach_threshold`. Returns
/// nullopt when every candidate is cut; an empty distribution is a state the
/// caller must handle, not an error.
inline std::optional<GormDistribution> build_gorm(const std::vector<OrmEntry>& orm,
                                                  const Pose& target,
                                                  const LocomotionLimits& limits,
                                                  const Environment& env,
                                                  double reach_threshold) {
  limits.validate();
  if (!target.is_finite()) throw std::invalid_argument("gorm: non-finite target");

  GormDistribution dist;
  dist.target = target;
  dist.reach_threshold = reach_threshold;
  for (const OrmEntry& entry : orm) {
    Pose world = target * entry.base_in_tcp;
    if (!detail::within_locomotion(limits, world)) continue;
    if (detail::collides(env, world)) continue;
    if (!(entry.score >= reach_threshold)) continue;
    dist.candidates.push_back(GormCandidate{entry.base_in_tcp, entry.score});
  }
  if (dist.candidates.empty()) return std::nullopt;
  dist.rebuild_world_cache();
  return dist;
}

struct NearestCandidate {
  double distance = std::numeric_limits<double>::infinity();
  std::size_t index = 0;
};

/// Nearest candidate to `query` under pose_distance. Equivalent to a linear
/// scan keeping the first strict minimum; the translation norm alone lower-
/// bounds the full distance, which prunes most rotation evaluations without
/// changing which index wins.
inline NearestCandidate min_distance(const GormDistribution& dist, const Pose& query,
                                     double lambda) {
  if (dist.size() == 0) throw std::invalid_argument("min_distance: empty distribution");
  const Eigen::Index n = dist.world_positions.rows();
  const Eigen::RowVector3d qt = query.translation.transpose();
  const Eigen::RowVector4d qq(query.rotation.w(), query.rotation.x(),
                              query.rotation.y(), query.rotation.z());

  NearestCandidate best;
  for (Eigen::Index i = 0; i < n; ++i) {
    double t_norm2 = (dist.world_positions.row(i) - qt).squaredNorm();
    if (t_norm2 >= best.distance * best.distance) continue;
    double dot = std::abs(dist.world_quats.row(i).dot(qq));
    double geo = 2.0 * std::acos(std::clamp(dot, 0.0, 1.0));
    double d = std::sqrt(t_norm2) + lambda * geo;
    if (d < best.distance) {
      best.distance = d;
      best.index = static_cast<std::size_t>(i);
    }
  }
  return best;
}

}  // namespace gorm
