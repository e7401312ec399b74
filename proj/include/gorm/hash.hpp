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

#include <openssl/sha.h>

#include <array>
#include <cstdint>
#include <cstring>
#include <vector>

#include "gorm/arm.hpp"

namespace gorm {

using ArmHash = std::array<std::uint8_t, 32>;

namespace detail {

inline void append_f64(std::vector<std::uint8_t>& buf, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

inline void append_pose(std::vector<std::uint8_t>& buf, const Pose& p) {
  for (int i = 0; i < 3; ++i) append_f64(buf, p.translation[i]);
  append_f64(buf, p.rotation.w());
  append_f64(buf, p.rotation.x());
  append_f64(buf, p.rotation.y());
  append_f64(buf, p.rotation.z());
}

}  // namespace detail

/// Canonical byte image of the arm's kinematic parameters. Two arms hash
/// equal iff these bytes are equal, so maps built for one arm are rejected
/// when loaded for another.
inline std::vector<std::uint8_t> arm_canonical_bytes(const ArmModel& arm) {
  std::vector<std::uint8_t> buf;
  buf.reserve(16 + arm.dof() * 96 + 112);
  std::uint64_t n = arm.dof();
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<std::uint8_t>(n >> (8 * i)));
  for (const Joint& j : arm.joints) {
    for (int i = 0; i < 3; ++i) detail::append_f64(buf, j.axis[i]);
    detail::append_pose(buf, j.origin);
    detail::append_f64(buf, j.lower);
    detail::append_f64(buf, j.upper);
  }
  detail::append_pose(buf, arm.tcp_offset);
  detail::append_pose(buf, arm.mount);
  return buf;
}

inline ArmHash arm_hash(const ArmModel& arm) {
  std::vector<std::uint8_t> bytes = arm_canonical_bytes(arm);
  ArmHash digest;
  SHA256(bytes.data(), bytes.size(), digest.data());
  return digest;
}

}  // namespace gorm
