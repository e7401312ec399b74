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
#include <stdexcept>
#include <vector>

#include "gorm/pose.hpp"

namespace gorm {

/// Deterministic set of TCP approach orientations: `n_dirs` approach
/// directions spread over the sphere, each swept through `n_rolls` rolls
/// about the approach axis. Index layout is direction-major:
/// quats[d * n_rolls + r].
struct OrientationSet {
  std::uint32_t n_dirs = 0;
  std::uint32_t n_rolls = 0;
  std::vector<Eigen::Quaterniond> quats;

  std::size_t size() const { return quats.size(); }
};

/// i-th of n points of the Fibonacci sphere lattice, unit length.
inline Eigen::Vector3d fibonacci_direction(std::uint32_t i, std::uint32_t n) {
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
  double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  double phi = static_cast<double>(i) * golden;
  return {r * std::cos(phi), r * std::sin(phi), z};
}

/// Orientation d*n_rolls+k maps the TCP +z axis onto Fibonacci direction d
/// (minimal rotation), then rolls by 2*pi*k/n_rolls about the local z axis.
inline OrientationSet sample_orientations(std::uint32_t n_dirs, std::uint32_t n_rolls) {
  if (n_dirs == 0 || n_rolls == 0) {
    throw std::invalid_argument("orientation counts must be positive");
  }
  OrientationSet set;
  set.n_dirs = n_dirs;
  set.n_rolls = n_rolls;
  set.quats.reserve(static_cast<std::size_t>(n_dirs) * n_rolls);
  for (std::uint32_t d = 0; d < n_dirs; ++d) {
    Eigen::Quaterniond point =
        Eigen::Quaterniond::FromTwoVectors(Eigen::Vector3d::UnitZ(),
                                           fibonacci_direction(d, n_dirs));
    for (std::uint32_t k = 0; k < n_rolls; ++k) {
      double roll = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n_rolls);
      Eigen::Quaterniond q =
          point * Eigen::Quaterniond(Eigen::AngleAxisd(roll, Eigen::Vector3d::UnitZ()));
      q.normalize();
      set.quats.push_back(q);
    }
  }
  return set;
}

}  // namespace gorm
