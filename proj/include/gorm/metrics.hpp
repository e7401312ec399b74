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
#include <algorithm>
#include <cmath>

#include "gorm/pose.hpp"

namespace gorm {

/// Angle of the shortest rotation taking q1 to q2, in [0, pi]. The absolute
/// value folds the double cover, so q and -q are the same rotation.
inline double geodesic_distance(const Eigen::Quaterniond& q1,
                                const Eigen::Quaterniond& q2) {
  double dot = std::abs(q1.dot(q2));
  return 2.0 * std::acos(std::clamp(dot, 0.0, 1.0));
}

/// Combined distance: Euclidean translation plus lambda-weighted rotation
/// geodesic (lambda in meters per radian).
inline double pose_distance(const Pose& a, const Pose& b, double lambda) {
  return (a.translation - b.translation).norm() +
         lambda * geodesic_distance(a.rotation, b.rotation);
}

/// Reward in (0, 1] that decays with the squared pose distance; 1 exactly at
/// distance 0.
inline double gorm_reward(double distance) { return std::exp(-distance * distance); }

}  // namespace gorm
