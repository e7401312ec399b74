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
#include <limits>
#include <stdexcept>
#include <vector>

#include "gorm/gorm.hpp"
#include "gorm/hull.hpp"
#include "gorm/rmap.hpp"

namespace gorm {

/// Reachable-workspace comparison: the hull of the well-covered voxels with
/// the base frozen at its nominal posture, against the hull swept over the
/// admissible height x pitch box. The volume ratio is the mobility gain the
/// extra body degrees of freedom buy.
struct WorkspaceResult {
  ConvexHull arm_hull;   // base at nominal height, nominal pitch
  ConvexHull body_hull;  // swept over the height x pitch sample grid
  double volume_ratio = 1.0;
};

/// Base pose (planar origin, zero yaw) at a given height and pitch.
inline Pose posture_pose(double height, double pitch) {
  return Pose(Eigen::Vector3d(0.0, 0.0, height),
              Eigen::Quaterniond(Eigen::AngleAxisd(pitch, Eigen::Vector3d::UnitY())));
}

/// Hulls are built from the voxel centers whose reachability index is at
/// least `threshold`. The sweep samples the height and pitch intervals on an
/// odd-count grid so the nominal posture is always one of the samples; the
/// swept hull therefore contains the nominal hull by construction, and
/// collapsed intervals reproduce it exactly.
inline WorkspaceResult workspace_hull(const ReachabilityMap& rm, const Pose& mount,
                                      const LocomotionLimits& limits, double threshold,
                                      int height_samples = 7, int pitch_samples = 7) {
  limits.validate();
  if (height_samples < 1 || pitch_samples < 1) {
    throw std::invalid_argument("workspace: sample counts must be >= 1");
  }
  if (height_samples % 2 == 0 || pitch_samples % 2 == 0) {
    throw std::invalid_argument("workspace: sample counts must be odd");
  }

  // Well-covered voxel centers in the body frame; the hull of this set is
  // all later steps need, because a rigid map of a hull's vertex set spans
  // the rigid map of the whole set.
  std::vector<Eigen::Vector3d> body_frame_pts;
  for (std::size_t v = 0; v < rm.grid.voxel_count(); ++v) {
    if (rm.index[v] >= threshold) {
      body_frame_pts.push_back(mount.apply(rm.grid.voxel_center(v)));
    }
  }
  ConvexHull body_frame_hull = convex_hull(body_frame_pts);

  const double h_nom = 0.5 * (limits.height_min + limits.height_max);
  const double p_nom = 0.5 * (limits.pitch_min + limits.pitch_max);
  const Pose nominal = posture_pose(h_nom, p_nom);

  WorkspaceResult result;
  result.arm_hull = body_frame_hull;
  for (Eigen::Vector3d& v : result.arm_hull.vertices) v = nominal.apply(v);

  const bool collapsed = limits.height_min == limits.height_max &&
                         limits.pitch_min == limits.pitch_max;
  if (collapsed) {
    result.body_hull = result.arm_hull;
    result.volume_ratio = 1.0;
    return result;
  }

  std::vector<Eigen::Vector3d> swept;
  swept.reserve(static_cast<std::size_t>(height_samples) * pitch_samples *
                body_frame_hull.vertices.size());
  for (int hi = 0; hi < height_samples; ++hi) {
    double th = height_samples == 1
                    ? 0.5
                    : static_cast<double>(hi) / (height_samples - 1);
    double h = limits.height_min + th * (limits.height_max - limits.height_min);
    for (int pi = 0; pi < pitch_samples; ++pi) {
      double tp = pitch_samples == 1
                      ? 0.5
                      : static_cast<double>(pi) / (pitch_samples - 1);
      double p = limits.pitch_min + tp * (limits.pitch_max - limits.pitch_min);
      Pose posture = posture_pose(h, p);
      for (const Eigen::Vector3d& v : body_frame_hull.vertices) {
        swept.push_back(posture.apply(v));
      }
    }
  }
  result.body_hull = convex_hull(swept);

  if (result.arm_hull.volume > 0.0) {
    result.volume_ratio = result.body_hull.volume / result.arm_hull.volume;
  } else {
    result.volume_ratio = result.body_hull.volume > 0.0
                              ? std::numeric_limits<double>::infinity()
                              : 1.0;
  }
  return result;
}

}  // namespace gorm
