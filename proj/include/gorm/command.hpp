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

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gorm/gorm.hpp"

namespace gorm {

/// One base command: planar velocities in the body frame, yaw rate, and
/// absolute height / pitch setpoints.
struct Command5D {
  double vx = 0.0;      // m/s, body forward
  double vy = 0.0;      // m/s, body left
  double omega = 0.0;   // rad/s, yaw rate
  double height = 0.0;  // m, absolute setpoint
  double pitch = 0.0;   // rad, absolute setpoint
};

/// Hardware velocity caps plus the pitch margin still allowed when the base
/// is at a height extreme.
struct SpeedCaps {
  double vx_max = 0.8;
  double vy_max = 0.5;
  double omega_max = 1.0;
  double edge_pitch = 0.1;

  void validate() const {
    if (!(vx_max > 0 && vy_max > 0 && omega_max > 0)) {
      throw std::invalid_argument("caps: velocity caps must be > 0");
    }
    if (!(edge_pitch >= 0)) {
      throw std::invalid_argument("caps: edge_pitch must be >= 0");
    }
  }
};

/// Admissible command box at one (height, pitch) operating point.
struct CommandBox {
  double vx_max = 0.0;
  double vy_max = 0.0;
  double omega_max = 0.0;
  double height_min = 0.0;
  double height_max = 0.0;
  double pitch_min = 0.0;
  double pitch_max = 0.0;
};

namespace detail {

/// Normalized excursion from nominal, in [0, 1]; 0 when the span is zero.
inline double excursion(double value, double nominal, double span) {
  if (!(span > 0)) return 0.0;
  return std::min(1.0, std::abs(value - nominal) / span);
}

}  // namespace detail

/// Command box at the given operating point. Away from the nominal height
/// the pitch interval shrinks linearly toward +-edge_pitch (never growing
/// past the locomotion interval), and each velocity cap is scaled by
/// (1 - excursion/2) for pitch and for height, so a base at both extremes
/// keeps a quarter of its speed.
inline CommandBox command_limits(const LocomotionLimits& limits, const SpeedCaps& caps,
                                 double height, double pitch) {
  limits.validate();
  caps.validate();

  CommandBox box;
  box.height_min = limits.height_min;
  box.height_max = limits.height_max;

  const double h_nom = 0.5 * (limits.height_min + limits.height_max);
  const double h_span = 0.5 * (limits.height_max - limits.height_min);
  const double u_h = detail::excursion(height, h_nom, h_span);

  const double edge_lo = std::max(-caps.edge_pitch, limits.pitch_min);
  const double edge_hi = std::min(caps.edge_pitch, limits.pitch_max);
  box.pitch_min = limits.pitch_min + u_h * (edge_lo - limits.pitch_min);
  box.pitch_max = limits.pitch_max + u_h * (edge_hi - limits.pitch_max);

  const double theta_max = std::max(std::abs(limits.pitch_min), std::abs(limits.pitch_max));
  const double u_p = detail::excursion(pitch, 0.0, theta_max);
  const double scale = (1.0 - 0.5 * u_p) * (1.0 - 0.5 * u_h);
  box.vx_max = scale * caps.vx_max;
  box.vy_max = scale * caps.vy_max;
  box.omega_max = scale * caps.omega_max;
  return box;
}

/// Clamps a raw command into the admissible set: height first, then pitch
/// into the interval at that height, then velocities under the caps scaled
/// at the clamped operating point.
inline Command5D clamp_command(const Command5D& raw, const LocomotionLimits& limits,
                               const SpeedCaps& caps) {
  Command5D cmd = raw;
  cmd.height = std::clamp(raw.height, limits.height_min, limits.height_max);
  CommandBox at_height = command_limits(limits, caps, cmd.height, raw.pitch);
  cmd.pitch = std::clamp(raw.pitch, at_height.pitch_min, at_height.pitch_max);
  CommandBox box = command_limits(limits, caps, cmd.height, cmd.pitch);
  cmd.vx = std::clamp(raw.vx, -box.vx_max, box.vx_max);
  cmd.vy = std::clamp(raw.vy, -box.vy_max, box.vy_max);
  cmd.omega = std::clamp(raw.omega, -box.omega_max, box.omega_max);
  return cmd;
}

}  // namespace gorm
