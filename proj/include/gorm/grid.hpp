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
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>

namespace gorm {

/// Regular voxel grid in the arm-base frame. `origin` is the minimum corner
/// of the whole volume; voxel (0,0,0) has its center at origin + spacing/2.
/// Linear voxel order is x-fastest: index = (iz * ny + iy) * nx + ix.
struct GridSpec {
  Eigen::Vector3d origin{-1.0, -1.0, -1.0};
  double spacing = 0.05;
  std::array<std::uint32_t, 3> dims{40, 40, 40};

  void validate() const {
    if (!(spacing > 0)) throw std::invalid_argument("grid: spacing must be > 0");
    if (dims[0] == 0 || dims[1] == 0 || dims[2] == 0) {
      throw std::invalid_argument("grid: dims must be positive");
    }
    if (!origin.allFinite()) throw std::invalid_argument("grid: origin must be finite");
  }

  std::size_t voxel_count() const {
    return static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
  }

  std::size_t linear_index(std::uint32_t ix, std::uint32_t iy, std::uint32_t iz) const {
    return (static_cast<std::size_t>(iz) * dims[1] + iy) * dims[0] + ix;
  }

  std::array<std::uint32_t, 3> voxel_coords(std::size_t linear) const {
    std::uint32_t ix = static_cast<std::uint32_t>(linear % dims[0]);
    std::uint32_t iy = static_cast<std::uint32_t>((linear / dims[0]) % dims[1]);
    std::uint32_t iz = static_cast<std::uint32_t>(linear / (static_cast<std::size_t>(dims[0]) * dims[1]));
    return {ix, iy, iz};
  }

  Eigen::Vector3d voxel_center(std::uint32_t ix, std::uint32_t iy, std::uint32_t iz) const {
    return origin + spacing * Eigen::Vector3d(ix + 0.5, iy + 0.5, iz + 0.5);
  }

  Eigen::Vector3d voxel_center(std::size_t linear) const {
    auto c = voxel_coords(linear);
    return voxel_center(c[0], c[1], c[2]);
  }

  /// Voxel containing `p`, or nullopt when `p` lies outside the volume.
  /// Points exactly on the max face belong to no voxel.
  std::optional<std::size_t> locate(const Eigen::Vector3d& p) const {
    Eigen::Vector3d rel = (p - origin) / spacing;
    std::array<std::uint32_t, 3> idx;
    for (int a = 0; a < 3; ++a) {
      double f = std::floor(rel[a]);
      if (f < 0.0 || f >= static_cast<double>(dims[static_cast<std::size_t>(a)])) {
        return std::nullopt;
      }
      idx[static_cast<std::size_t>(a)] = static_cast<std::uint32_t>(f);
    }
    return linear_index(idx[0], idx[1], idx[2]);
  }

  Eigen::Vector3d min_corner() const { return origin; }

  Eigen::Vector3d max_corner() const {
    return origin + spacing * Eigen::Vector3d(dims[0], dims[1], dims[2]);
  }

  bool operator==(const GridSpec& other) const {
    return origin == other.origin && spacing == other.spacing && dims == other.dims;
  }
};

}  // namespace gorm
