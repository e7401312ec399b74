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
#include <Eigen/Geometry>
#include <cmath>
#include <stdexcept>

namespace gorm {

/// Rigid transform in SE(3): p_parent = rotation * p_local + translation.
///
/// A Pose named `a_in_b` is the pose of frame `a` expressed in frame `b`,
/// so `a_in_c = b_in_c * a_in_b`. The rotation is kept unit-norm after every
/// construction and composition.
struct Pose {
  Eigen::Vector3d translation{Eigen::Vector3d::Zero()};
  Eigen::Quaterniond rotation{Eigen::Quaterniond::Identity()};

  Pose() = default;
  Pose(const Eigen::Vector3d& t, const Eigen::Quaterniond& q)
      : translation(t), rotation(q) {
    double n = rotation.norm();
    if (!(n > 1e-12) || !std::isfinite(n)) {
      throw std::invalid_argument("Pose: rotation quaternion is degenerate");
    }
    rotation.coeffs() /= n;
  }

  static Pose identity() { return Pose{}; }

  static Pose from_translation(double x, double y, double z) {
    return Pose(Eigen::Vector3d(x, y, z), Eigen::Quaterniond::Identity());
  }

  static Pose from_translation(const Eigen::Vector3d& t) {
    return Pose(t, Eigen::Quaterniond::Identity());
  }

  static Pose rot_x(double angle) {
    return Pose(Eigen::Vector3d::Zero(),
                Eigen::Quaterniond(Eigen::AngleAxisd(angle, Eigen::Vector3d::UnitX())));
  }
  static Pose rot_y(double angle) {
    return Pose(Eigen::Vector3d::Zero(),
                Eigen::Quaterniond(Eigen::AngleAxisd(angle, Eigen::Vector3d::UnitY())));
  }
  static Pose rot_z(double angle) {
    return Pose(Eigen::Vector3d::Zero(),
                Eigen::Quaterniond(Eigen::AngleAxisd(angle, Eigen::Vector3d::UnitZ())));
  }

  // Intrinsic Z-Y-X: yaw about z, then pitch about y, then roll about x.
  static Pose from_xyz_rpy(const Eigen::Vector3d& xyz, const Eigen::Vector3d& rpy) {
    Eigen::Quaterniond q = Eigen::AngleAxisd(rpy.z(), Eigen::Vector3d::UnitZ()) *
                           Eigen::AngleAxisd(rpy.y(), Eigen::Vector3d::UnitY()) *
                           Eigen::AngleAxisd(rpy.x(), Eigen::Vector3d::UnitX());
    return Pose(xyz, q);
  }

  Pose operator*(const Pose& other) const {
    Pose out;
    out.translation = translation + rotation * other.translation;
    out.rotation = rotation * other.rotation;
    out.rotation.normalize();
    return out;
  }

  Pose inverse() const {
    Pose out;
    out.rotation = rotation.conjugate();
    out.translation = -(out.rotation * translation);
    return out;
  }

  Eigen::Vector3d apply(const Eigen::Vector3d& p) const {
    return rotation * p + translation;
  }

  /// Z-Y-X Euler angles of the rotation; pitch in [-pi/2, pi/2].
  Eigen::Vector3d rpy() const {
    Eigen::Matrix3d r = rotation.toRotationMatrix();
    double sp = -r(2, 0);
    sp = sp > 1.0 ? 1.0 : (sp < -1.0 ? -1.0 : sp);
    double pitch = std::asin(sp);
    double roll = std::atan2(r(2, 1), r(2, 2));
    double yaw = std::atan2(r(1, 0), r(0, 0));
    return {roll, pitch, yaw};
  }

  double yaw() const {
    Eigen::Matrix3d r = rotation.toRotationMatrix();
    return std::atan2(r(1, 0), r(0, 0));
  }

  bool is_finite() const {
    return translation.allFinite() && rotation.coeffs().allFinite();
  }
};

/// Axis-angle vector of the shortest rotation represented by q.
inline Eigen::Vector3d rotation_log(const Eigen::Quaterniond& q_in) {
  Eigen::Quaterniond q = q_in.normalized();
  if (q.w() < 0) q.coeffs() = -q.coeffs();
  double s = q.vec().norm();
  if (s < 1e-12) return 2.0 * q.vec();
  double angle = 2.0 * std::atan2(s, q.w());
  return (angle / s) * q.vec();
}

inline double wrap_to_pi(double a) {
  a = std::fmod(a + M_PI, 2.0 * M_PI);
  if (a < 0) a += 2.0 * M_PI;
  return a - M_PI;
}

}  // namespace gorm
