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

#include <vector>

#include "gorm/pose.hpp"
#include "gorm/rmap.hpp"

namespace gorm {

/// One inverted reachability sample: where the robot body sits, expressed in
/// the frame of the TCP that produced the sample, and how well-covered the
/// source voxel was.
struct OrmEntry {
  Pose base_in_tcp;
  double score = 0.0;  // orientation coverage of the source voxel, in [0, 1]
};

/// Inverts the map: every reachable (voxel, orientation) pair becomes a body
/// placement relative to the TCP. With the TCP later pinned to a task pose,
/// each entry is one candidate body pose that can reach it. Entry order is
/// voxel-major with ascending orientation index, so inversion is a pure
/// reindexing and byte-stable across runs.
inline std::vector<OrmEntry> invert_rm(const ReachabilityMap& rm, const Pose& mount) {
  std::vector<OrmEntry> entries;
  const std::size_t n_vox = rm.grid.voxel_count();
  const std::size_t n_orient = rm.orientations.size();
  for (std::size_t v = 0; v < n_vox; ++v) {
    std::size_t hits = rm.popcount(v);
    if (hits == 0) continue;
    const double score =
        static_cast<double>(hits) / static_cast<double>(n_orient);
    const Eigen::Vector3d center = rm.grid.voxel_center(v);
    for (std::size_t o = 0; o < n_orient; ++o) {
      if (!rm.bit(v, o)) continue;
      Pose tcp_in_body = mount * Pose(center, rm.orientations.quats[o]);
      entries.push_back(OrmEntry{tcp_in_body.inverse(), score});
    }
  }
  return entries;
}

}  // namespace gorm
