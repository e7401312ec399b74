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
#include <array>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

namespace gorm {

/// Convex hull of a 3-D point set. Faces are triangles wound outward.
/// A degenerate input (fewer than four points, or all within tolerance of a
/// common plane) keeps the input points verbatim and reports zero volume and
/// area, so sweeping a degenerate set still covers it.
struct ConvexHull {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 3>> faces;
  double volume = 0.0;
  double area = 0.0;
  bool degenerate = false;
};

namespace detail {

inline ConvexHull degenerate_hull(const std::vector<Eigen::Vector3d>& pts) {
  ConvexHull hull;
  hull.vertices = pts;
  hull.degenerate = true;
  return hull;
}

}  // namespace detail

/// Deterministic incremental hull: a seed tetrahedron from extreme points,
/// then every remaining point in input order replaces the faces it can see
/// with a fan to its horizon. New faces are oriented against a fixed
/// interior point, so no winding bookkeeping is carried across steps.
inline ConvexHull convex_hull(const std::vector<Eigen::Vector3d>& pts) {
  const std::size_t n = pts.size();
  if (n < 4) return detail::degenerate_hull(pts);

  Eigen::Vector3d lo = pts[0], hi = pts[0];
  for (const Eigen::Vector3d& p : pts) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const double diag = (hi - lo).norm();
  if (diag == 0.0) return detail::degenerate_hull(pts);
  const double eps = 1e-9 * diag;

  // Seed tetrahedron: lexicographic-min point, the farthest point from it,
  // the point farthest from their line, the point farthest from their plane.
  auto lex_less = [](const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
    if (a.x() != b.x()) return a.x() < b.x();
    if (a.y() != b.y()) return a.y() < b.y();
    return a.z() < b.z();
  };
  std::size_t i0 = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (lex_less(pts[i], pts[i0])) i0 = i;
  }
  std::size_t i1 = i0;
  double best = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    double d = (pts[i] - pts[i0]).squaredNorm();
    if (d > best) {
      best = d;
      i1 = i;
    }
  }
  if (std::sqrt(best) <= eps) return detail::degenerate_hull(pts);

  const Eigen::Vector3d axis = (pts[i1] - pts[i0]).normalized();
  std::size_t i2 = i0;
  best = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    double d = (pts[i] - pts[i0]).cross(axis).squaredNorm();
    if (d > best) {
      best = d;
      i2 = i;
    }
  }
  if (std::sqrt(best) <= eps) return detail::degenerate_hull(pts);

  const Eigen::Vector3d plane_n =
      (pts[i1] - pts[i0]).cross(pts[i2] - pts[i0]).normalized();
  std::size_t i3 = i0;
  best = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    double d = std::abs(plane_n.dot(pts[i] - pts[i0]));
    if (d > best) {
      best = d;
      i3 = i;
    }
  }
  if (best <= eps) return detail::degenerate_hull(pts);

  const Eigen::Vector3d interior =
      0.25 * (pts[i0] + pts[i1] + pts[i2] + pts[i3]);

  struct Face {
    std::array<std::size_t, 3> v;
    Eigen::Vector3d normal;  // outward, unit
    double offset;           // normal . x = offset on the face plane
    bool alive = true;
  };
  std::vector<Face> faces;
  auto add_face = [&](std::size_t a, std::size_t b, std::size_t c) {
    Face f;
    Eigen::Vector3d nrm = (pts[b] - pts[a]).cross(pts[c] - pts[a]);
    double len = nrm.norm();
    if (len == 0.0) return;  // sliver; neighbors cover the same plane region
    nrm /= len;
    if (nrm.dot(interior - pts[a]) > 0) {
      std::swap(b, c);
      nrm = -nrm;
    }
    f.v = {a, b, c};
    f.normal = nrm;
    f.offset = nrm.dot(pts[a]);
    faces.push_back(f);
  };
  add_face(i0, i1, i2);
  add_face(i0, i1, i3);
  add_face(i0, i2, i3);
  add_face(i1, i2, i3);

  for (std::size_t p = 0; p < n; ++p) {
    if (p == i0 || p == i1 || p == i2 || p == i3) continue;
    std::vector<std::size_t> visible;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (faces[f].alive && faces[f].normal.dot(pts[p]) - faces[f].offset > eps) {
        visible.push_back(f);
      }
    }
    if (visible.empty()) continue;

    // Horizon = undirected edges used by exactly one visible face.
    std::map<std::pair<std::size_t, std::size_t>, int> edge_count;
    for (std::size_t f : visible) {
      const auto& v = faces[f].v;
      for (int e = 0; e < 3; ++e) {
        std::size_t a = v[static_cast<std::size_t>(e)];
        std::size_t b = v[static_cast<std::size_t>((e + 1) % 3)];
        edge_count[std::make_pair(std::min(a, b), std::max(a, b))] += 1;
      }
    }
    for (std::size_t f : visible) faces[f].alive = false;
    for (const auto& [edge, count] : edge_count) {
      if (count == 1) add_face(edge.first, edge.second, p);
    }
  }

  // Compact to the surviving faces, re-indexing vertices in ascending
  // original order.
  ConvexHull hull;
  std::vector<int> remap(n, -1);
  for (const Face& f : faces) {
    if (!f.alive) continue;
    for (std::size_t v : f.v) remap[v] = 0;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (remap[i] == 0) {
      remap[i] = static_cast<int>(hull.vertices.size());
      hull.vertices.push_back(pts[i]);
    }
  }
  for (const Face& f : faces) {
    if (!f.alive) continue;
    hull.faces.push_back({remap[f.v[0]], remap[f.v[1]], remap[f.v[2]]});
    const Eigen::Vector3d a = pts[f.v[0]] - interior;
    const Eigen::Vector3d b = pts[f.v[1]] - interior;
    const Eigen::Vector3d c = pts[f.v[2]] - interior;
    hull.volume += a.dot(b.cross(c)) / 6.0;
    hull.area += 0.5 * (pts[f.v[1]] - pts[f.v[0]]).cross(pts[f.v[2]] - pts[f.v[0]]).norm();
  }
  return hull;
}

/// True when `p` is inside or on the hull, within `tol` of every face plane.
inline bool hull_contains(const ConvexHull& hull, const Eigen::Vector3d& p, double tol) {
  if (hull.degenerate) return false;
  for (const auto& f : hull.faces) {
    const Eigen::Vector3d& a = hull.vertices[static_cast<std::size_t>(f[0])];
    const Eigen::Vector3d& b = hull.vertices[static_cast<std::size_t>(f[1])];
    const Eigen::Vector3d& c = hull.vertices[static_cast<std::size_t>(f[2])];
    Eigen::Vector3d nrm = (b - a).cross(c - a);
    double len = nrm.norm();
    if (len == 0.0) continue;
    if (nrm.dot(p - a) / len > tol) return false;
  }
  return true;
}

}  // namespace gorm
