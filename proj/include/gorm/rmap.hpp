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
#include <bit>
#include <cstdint>
#include <limits>
#include <vector>

#include "gorm/arm.hpp"
#include "gorm/grid.hpp"
#include "gorm/hash.hpp"
#include "gorm/orientation.hpp"
#include "gorm/parallel.hpp"
#include "gorm/pose.hpp"
#include "gorm/rng.hpp"

namespace gorm {

/// Orientation-resolved reachability map in the arm-base frame. For every
/// voxel, one bit per orientation says whether the arm can place the TCP at
/// the voxel center with that orientation; `index` is the per-voxel fraction
/// of reachable orientations.
struct ReachabilityMap {
  GridSpec grid;
  OrientationSet orientations;
  ArmHash hash{};
  std::vector<std::uint64_t> bitmask;  // voxel-major, words_per_voxel() each
  std::vector<float> index;            // one entry per voxel, in [0, 1]

  std::size_t words_per_voxel() const { return (orientations.size() + 63) / 64; }

  bool bit(std::size_t voxel, std::size_t orient) const {
    std::uint64_t word = bitmask[voxel * words_per_voxel() + orient / 64];
    return (word >> (orient % 64)) & 1u;
  }

  void set_bit(std::size_t voxel, std::size_t orient) {
    bitmask[voxel * words_per_voxel() + orient / 64] |= std::uint64_t{1} << (orient % 64);
  }

  std::size_t popcount(std::size_t voxel) const {
    std::size_t wpv = words_per_voxel();
    std::size_t n = 0;
    for (std::size_t w = 0; w < wpv; ++w) {
      n += static_cast<std::size_t>(std::popcount(bitmask[voxel * wpv + w]));
    }
    return n;
  }
};

struct Sphere {
  Eigen::Vector3d center{Eigen::Vector3d::Zero()};
  double radius = 0.0;
};

struct RmBuildParams {
  IkParams ik{};
  int seeds_per_pose = 3;  // warm start, mid-limits, then random restarts
  std::uint64_t seed = 7;  // stream for the random restarts
  int threads = 0;         // 0 selects the hardware count

  void validate() const {
    ik.validate();
    if (seeds_per_pose < 1) {
      throw std::invalid_argument("rm: seeds_per_pose must be positive");
    }
  }
};

/// Builds the map by dense IK: every (voxel center, orientation) pair is
/// attempted from up to seeds_per_pose starts. Attempt 0 warm-starts from the
/// last success in the same voxel (the roll sweep makes consecutive targets
/// near-identical), attempt 1 is the mid-limits posture, later attempts are
/// uniform draws in the limit box from a per-voxel stream. Work is split by
/// voxel and each voxel owns one stream, so the result is independent of the
/// thread count.
inline ReachabilityMap build_rm(const ArmModel& arm, const GridSpec& grid,
                                const OrientationSet& orientations,
                                const RmBuildParams& params = {}) {
  arm.validate();
  grid.validate();
  params.validate();
  if (orientations.size() == 0) {
    throw std::invalid_argument("rm: orientation set must be non-empty");
  }

  ReachabilityMap rm;
  rm.grid = grid;
  rm.orientations = orientations;
  rm.hash = arm_hash(arm);
  const std::size_t n_vox = grid.voxel_count();
  const std::size_t n_orient = orientations.size();
  rm.bitmask.assign(n_vox * rm.words_per_voxel(), 0);
  rm.index.assign(n_vox, 0.0f);

  const double reach = arm.reach_bound() + params.ik.pos_tol;
  const JointConfig q_mid = arm.mid_limits();

  parallel_for(n_vox, params.threads, [&](std::size_t v) {
    const Eigen::Vector3d center = rm.grid.voxel_center(v);
    if (center.norm() > reach) return;

    Rng rng(derive_seed(params.seed, 0, v));
    JointConfig q_warm = q_mid;
    bool have_warm = false;
    std::size_t hits = 0;

    for (std::size_t o = 0; o < n_orient; ++o) {
      const Pose target(center, orientations.quats[o]);
      std::optional<JointConfig> sol;
      for (int attempt = 0; attempt < params.seeds_per_pose && !sol; ++attempt) {
        JointConfig seed;
        if (attempt == 0) {
          seed = have_warm ? q_warm : q_mid;
        } else if (attempt == 1) {
          if (!have_warm) continue;  // attempt 0 already used mid-limits
          seed = q_mid;
        } else {
          seed.resize(static_cast<Eigen::Index>(arm.dof()));
          for (std::size_t j = 0; j < arm.dof(); ++j) {
            seed[static_cast<Eigen::Index>(j)] =
                rng.uniform(arm.joints[j].lower, arm.joints[j].upper);
          }
        }
        sol = solve_ik(arm, target, seed, params.ik);
      }
      if (sol) {
        rm.set_bit(v, o);
        q_warm = *sol;
        have_warm = true;
        ++hits;
      }
    }
    rm.index[v] =
        static_cast<float>(static_cast<double>(hits) / static_cast<double>(n_orient));
  });
  return rm;
}

/// True when the map marks (containing voxel of `point`, `orient`) reachable.
/// Points outside the grid volume are unreachable.
inline bool query_reachable(const ReachabilityMap& rm, const Eigen::Vector3d& point,
                            std::size_t orient) {
  if (orient >= rm.orientations.size()) {
    throw std::out_of_range("rm: orientation index out of range");
  }
  std::optional<std::size_t> v = rm.grid.locate(point);
  if (!v) return false;
  return rm.bit(*v, orient);
}

/// Reachability index of the voxel containing `point`; 0 outside the grid.
inline float query_index(const ReachabilityMap& rm, const Eigen::Vector3d& point) {
  std::optional<std::size_t> v = rm.grid.locate(point);
  if (!v) return 0.0f;
  return rm.index[*v];
}

namespace detail {

/// One pass of the exact squared-distance transform (lower envelope of
/// parabolas) along one array; grid units. Entries at infinity, meaning "no
/// seed reachable along earlier axes", contribute no parabola.
inline void edt_pass_1d(const std::vector<double>& f, std::vector<double>& out) {
  const double inf = std::numeric_limits<double>::infinity();
  const int n = static_cast<int>(f.size());
  std::vector<int> v(static_cast<std::size_t>(n));
  std::vector<double> z(static_cast<std::size_t>(n) + 1);
  int k = -1;  // top of the envelope; -1 while empty
  for (int q = 0; q < n; ++q) {
    if (f[static_cast<std::size_t>(q)] == inf) continue;
    double s;
    for (;;) {
      if (k < 0) {
        s = -inf;
        break;
      }
      int p = v[static_cast<std::size_t>(k)];
      s = ((f[static_cast<std::size_t>(q)] + q * q) -
           (f[static_cast<std::size_t>(p)] + p * p)) /
          (2.0 * q - 2.0 * p);
      if (s > z[static_cast<std::size_t>(k)]) break;
      --k;
    }
    ++k;
    v[static_cast<std::size_t>(k)] = q;
    z[static_cast<std::size_t>(k)] = s;
    z[static_cast<std::size_t>(k) + 1] = inf;
  }
  if (k < 0) {
    for (int q = 0; q < n; ++q) out[static_cast<std::size_t>(q)] = inf;
    return;
  }
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[static_cast<std::size_t>(j) + 1] < q) ++j;
    int p = v[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(q)] = (q - p) * (q - p) + f[static_cast<std::size_t>(p)];
  }
}

/// Exact Euclidean distance (world units) from every voxel center to the
/// nearest seed voxel center; infinity where no seed exists.
inline std::vector<double> edt_3d(const GridSpec& grid, const std::vector<bool>& seedmask) {
  const double inf = std::numeric_limits<double>::infinity();
  const std::uint32_t nx = grid.dims[0], ny = grid.dims[1], nz = grid.dims[2];
  std::vector<double> d(grid.voxel_count());
  for (std::size_t v = 0; v < d.size(); ++v) d[v] = seedmask[v] ? 0.0 : inf;

  std::vector<double> line, out;
  auto max_dim = static_cast<std::size_t>(std::max({nx, ny, nz}));
  line.resize(max_dim);
  out.resize(max_dim);

  // Pass along x, then y, then z; infinities stay infinite through each pass.
  for (std::uint32_t iz = 0; iz < nz; ++iz) {
    for (std::uint32_t iy = 0; iy < ny; ++iy) {
      bool any = false;
      for (std::uint32_t ix = 0; ix < nx; ++ix) {
        line[ix] = d[grid.linear_index(ix, iy, iz)];
        any = any || line[ix] < inf;
      }
      if (!any) continue;
      line.resize(nx);
      out.resize(nx);
      edt_pass_1d(line, out);
      for (std::uint32_t ix = 0; ix < nx; ++ix) d[grid.linear_index(ix, iy, iz)] = out[ix];
      line.resize(max_dim);
      out.resize(max_dim);
    }
  }
  for (std::uint32_t iz = 0; iz < nz; ++iz) {
    for (std::uint32_t ix = 0; ix < nx; ++ix) {
      bool any = false;
      for (std::uint32_t iy = 0; iy < ny; ++iy) {
        line[iy] = d[grid.linear_index(ix, iy, iz)];
        any = any || line[iy] < inf;
      }
      if (!any) continue;
      line.resize(ny);
      out.resize(ny);
      edt_pass_1d(line, out);
      for (std::uint32_t iy = 0; iy < ny; ++iy) d[grid.linear_index(ix, iy, iz)] = out[iy];
      line.resize(max_dim);
      out.resize(max_dim);
    }
  }
  for (std::uint32_t iy = 0; iy < ny; ++iy) {
    for (std::uint32_t ix = 0; ix < nx; ++ix) {
      bool any = false;
      for (std::uint32_t iz = 0; iz < nz; ++iz) {
        line[iz] = d[grid.linear_index(ix, iy, iz)];
        any = any || line[iz] < inf;
      }
      if (!any) continue;
      line.resize(nz);
      out.resize(nz);
      edt_pass_1d(line, out);
      for (std::uint32_t iz = 0; iz < nz; ++iz) d[grid.linear_index(ix, iy, iz)] = out[iz];
      line.resize(max_dim);
      out.resize(max_dim);
    }
  }
  for (double& v : d) v = v < inf ? grid.spacing * std::sqrt(v) : inf;
  return d;
}

}  // namespace detail

/// Largest sphere, centered on a voxel center whose index is >= threshold,
/// that contains neither a below-threshold voxel center nor any point outside
/// the grid volume. Ties pick the lowest linear voxel index; if no voxel
/// qualifies the result is a zero sphere at the volume center. The center is
/// returned in the body frame (`mount` maps arm base to body).
inline Sphere tracking_sphere(const ReachabilityMap& rm, double threshold,
                              const Pose& mount = Pose::identity()) {
  const GridSpec& grid = rm.grid;
  const std::size_t n_vox = grid.voxel_count();
  std::vector<bool> bad(n_vox);
  bool any_good = false, any_bad = false;
  for (std::size_t v = 0; v < n_vox; ++v) {
    bad[v] = !(rm.index[v] >= threshold);
    any_good = any_good || !bad[v];
    any_bad = any_bad || bad[v];
  }
  if (!any_good) {
    return Sphere{mount.apply(0.5 * (grid.min_corner() + grid.max_corner())), 0.0};
  }

  std::vector<double> to_bad;
  if (any_bad) to_bad = detail::edt_3d(grid, bad);

  Sphere best{Eigen::Vector3d::Zero(), -1.0};
  std::size_t best_v = 0;
  const Eigen::Vector3d lo = grid.min_corner(), hi = grid.max_corner();
  for (std::size_t v = 0; v < n_vox; ++v) {
    if (bad[v]) continue;
    const Eigen::Vector3d c = grid.voxel_center(v);
    double r = std::min((c - lo).minCoeff(), (hi - c).minCoeff());
    if (any_bad) r = std::min(r, to_bad[v]);
    if (r > best.radius) {
      best.radius = r;
      best_v = v;
    }
  }
  best.center = mount.apply(grid.voxel_center(best_v));
  return best;
}

}  // namespace gorm
