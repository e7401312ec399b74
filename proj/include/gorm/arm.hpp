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
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gorm/pose.hpp"

namespace gorm {

/// One revolute joint: `origin` is the fixed parent-frame link offset, the
/// joint then rotates about `axis` (unit, in the post-origin frame).
struct Joint {
  Eigen::Vector3d axis{Eigen::Vector3d::UnitZ()};
  Pose origin{};
  double lower = -M_PI;
  double upper = M_PI;
};

using JointConfig = Eigen::VectorXd;

/// Serial-chain arm. Frames: body -> (mount) -> arm base -> joints -> TCP.
/// Immutable after load; every operation below is a pure function of it.
struct ArmModel {
  std::vector<Joint> joints;
  Pose tcp_offset{};
  Pose mount{};  // arm base expressed in the body frame

  std::size_t dof() const { return joints.size(); }

  void validate() const {
    if (joints.empty()) throw std::invalid_argument("arm: chain length must be >= 1");
    for (std::size_t i = 0; i < joints.size(); ++i) {
      const Joint& j = joints[i];
      if (std::abs(j.axis.norm() - 1.0) > 1e-9) {
        throw std::invalid_argument("arm: joint " + std::to_string(i) +
                                    " axis must be unit length");
      }
      if (!(j.lower < j.upper)) {
        throw std::invalid_argument("arm: joint " + std::to_string(i) +
                                    " limits must satisfy min < max");
      }
    }
  }

  /// Upper bound on TCP distance from the arm base, any configuration.
  double reach_bound() const {
    double r = tcp_offset.translation.norm();
    for (const Joint& j : joints) r += j.origin.translation.norm();
    return r;
  }

  JointConfig mid_limits() const {
    JointConfig q(joints.size());
    for (std::size_t i = 0; i < joints.size(); ++i) {
      q[static_cast<Eigen::Index>(i)] = 0.5 * (joints[i].lower + joints[i].upper);
    }
    return q;
  }
};

struct IkParams {
  double damping = 1e-2;    // fixed Levenberg damping
  int max_iters = 100;
  double pos_tol = 1e-4;    // m
  double rot_tol = 1e-3;    // rad
  double step_clamp = 0.2;  // rad per iteration, inf-norm

  void validate() const {
    if (!(damping >= 0)) throw std::invalid_argument("ik: damping must be >= 0");
    if (max_iters < 1) throw std::invalid_argument("ik: max_iters must be positive");
    if (!(pos_tol > 0)) throw std::invalid_argument("ik: pos_tol must be > 0");
    if (!(rot_tol > 0)) throw std::invalid_argument("ik: rot_tol must be > 0");
    if (!(step_clamp > 0)) throw std::invalid_argument("ik: step_clamp must be > 0");
  }
};

namespace detail {

inline void check_config_size(const ArmModel& arm, const JointConfig& q) {
  if (static_cast<std::size_t>(q.size()) != arm.dof()) {
    throw std::invalid_argument("joint configuration size " +
                                std::to_string(q.size()) + " does not match arm dof " +
                                std::to_string(arm.dof()));
  }
}

}  // namespace detail

/// Frames in which each joint's axis lives (pre-rotation), plus the TCP frame
/// as the last element. All in the arm-base frame.
inline std::vector<Pose> joint_frames(const ArmModel& arm, const JointConfig& q) {
  detail::check_config_size(arm, q);
  std::vector<Pose> frames;
  frames.reserve(arm.dof() + 1);
  Pose t = Pose::identity();
  for (std::size_t i = 0; i < arm.dof(); ++i) {
    const Joint& j = arm.joints[i];
    t = t * j.origin;
    frames.push_back(t);
    Eigen::Quaterniond rot(Eigen::AngleAxisd(q[static_cast<Eigen::Index>(i)], j.axis));
    t = t * Pose(Eigen::Vector3d::Zero(), rot);
  }
  frames.push_back(t * arm.tcp_offset);
  return frames;
}

/// TCP pose in the arm-base frame.
inline Pose forward_kinematics(const ArmModel& arm, const JointConfig& q) {
  detail::check_config_size(arm, q);
  Pose t = Pose::identity();
  for (std::size_t i = 0; i < arm.dof(); ++i) {
    const Joint& j = arm.joints[i];
    Eigen::Quaterniond rot(Eigen::AngleAxisd(q[static_cast<Eigen::Index>(i)], j.axis));
    t = t * j.origin * Pose(Eigen::Vector3d::Zero(), rot);
  }
  return t * arm.tcp_offset;
}

/// Geometric Jacobian at the TCP, arm-base frame. Rows 0-2 linear (m/rad),
/// rows 3-5 angular (rad/rad).
inline Eigen::Matrix<double, 6, Eigen::Dynamic> jacobian(const ArmModel& arm,
                                                         const JointConfig& q) {
  std::vector<Pose> frames = joint_frames(arm, q);
  const Eigen::Vector3d tcp = frames.back().translation;
  Eigen::Matrix<double, 6, Eigen::Dynamic> jac(6, static_cast<Eigen::Index>(arm.dof()));
  for (std::size_t i = 0; i < arm.dof(); ++i) {
    Eigen::Vector3d z = frames[i].rotation * arm.joints[i].axis;
    jac.col(static_cast<Eigen::Index>(i)).head<3>() = z.cross(tcp - frames[i].translation);
    jac.col(static_cast<Eigen::Index>(i)).tail<3>() = z;
  }
  return jac;
}

inline bool within_limits(const ArmModel& arm, const JointConfig& q) {
  detail::check_config_size(arm, q);
  for (std::size_t i = 0; i < arm.dof(); ++i) {
    double v = q[static_cast<Eigen::Index>(i)];
    if (v < arm.joints[i].lower || v > arm.joints[i].upper) return false;
  }
  return true;
}

inline JointConfig clamp_to_limits(const ArmModel& arm, JointConfig q) {
  detail::check_config_size(arm, q);
  for (std::size_t i = 0; i < arm.dof(); ++i) {
    auto k = static_cast<Eigen::Index>(i);
    if (q[k] < arm.joints[i].lower) q[k] = arm.joints[i].lower;
    if (q[k] > arm.joints[i].upper) q[k] = arm.joints[i].upper;
  }
  return q;
}

/// Six-joint elbow arm in the 0.7 m reach class, used as the stock model by
/// the tools and as the fixture for most tests. Axes are z-y-y-y-z-x, the
/// usual yaw / shoulder / elbow / wrist-pitch / wrist-yaw / wrist-roll
/// layout; the mount raises the arm base off the body origin.
inline ArmModel default_arm() {
  ArmModel arm;
  arm.joints = {
      Joint{Eigen::Vector3d::UnitZ(), Pose::from_translation({0.0, 0.0, 0.0585}),
            -2.62, 2.62},
      Joint{Eigen::Vector3d::UnitY(), Pose::from_translation({0.0, 0.0, 0.045}),
            0.0, 2.96},
      Joint{Eigen::Vector3d::UnitY(), Pose::from_translation({0.30, 0.0, 0.0}),
            -2.87, 0.0},
      Joint{Eigen::Vector3d::UnitY(), Pose::from_translation({0.22, 0.0, 0.0}),
            -1.52, 1.52},
      Joint{Eigen::Vector3d::UnitZ(), Pose::from_translation({0.06, 0.0, 0.0}),
            -1.34, 1.34},
      Joint{Eigen::Vector3d::UnitX(), Pose::from_translation({0.049, 0.0, 0.0}),
            -2.79, 2.79},
  };
  arm.tcp_offset = Pose::from_translation({0.11, 0.0, 0.0});
  arm.mount = Pose::from_translation({0.15, 0.0, 0.12});
  return arm;
}

/// Damped-least-squares IK on the 6-D pose error twist. Returns the solved
/// configuration, or nullopt when the target is not reached; not reaching is
/// the reachability signal, not a failure. Deterministic in (seed, params).
///
/// The seed is clamped into limits first and each iterate is re-clamped, so a
/// success always lies within limits; a solution resting on a clamp that still
/// meets the tolerances counts as reachable.
inline std::optional<JointConfig> solve_ik(const ArmModel& arm, const Pose& target,
                                           const JointConfig& seed,
                                           const IkParams& params) {
  detail::check_config_size(arm, seed);
  params.validate();
  if (!target.is_finite() || !seed.allFinite()) {
    throw std::invalid_argument("solve_ik: non-finite input");
  }

  const auto n = static_cast<Eigen::Index>(arm.dof());
  JointConfig q = clamp_to_limits(arm, seed);
  const double lambda2 = params.damping * params.damping;

  for (int iter = 0; iter <= params.max_iters; ++iter) {
    Pose cur = forward_kinematics(arm, q);
    Eigen::Vector3d e_pos = target.translation - cur.translation;
    Eigen::Vector3d e_rot = rotation_log(target.rotation * cur.rotation.conjugate());
    if (e_pos.norm() < params.pos_tol && e_rot.norm() < params.rot_tol) return q;
    if (iter == params.max_iters) break;

    Eigen::Matrix<double, 6, Eigen::Dynamic> jac = jacobian(arm, q);
    Eigen::Matrix<double, 6, 1> err;
    err << e_pos, e_rot;
    Eigen::MatrixXd normal = jac.transpose() * jac;
    normal.diagonal().array() += lambda2;
    Eigen::VectorXd dq = normal.ldlt().solve(jac.transpose() * err);

    double step = dq.cwiseAbs().maxCoeff();
    if (step > params.step_clamp) dq *= params.step_clamp / step;
    JointConfig q_next = clamp_to_limits(arm, q + dq);
    if ((q_next - q).cwiseAbs().maxCoeff() < 1e-12) return std::nullopt;  // stagnated
    q = q_next;
  }
  return std::nullopt;
}

}  // namespace gorm
