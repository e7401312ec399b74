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

#include <array>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "gorm/gorm.hpp"
#include "gorm/grid.hpp"
#include "gorm/hash.hpp"
#include "gorm/orm.hpp"
#include "gorm/rmap.hpp"

namespace gorm {

enum class MapIoCode {
  BadMagic,
  UnsupportedVersion,
  Truncated,
  SizeMismatch,
  Io,
};

class MapIoError : public std::runtime_error {
 public:
  MapIoError(MapIoCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  MapIoCode code() const { return code_; }

 private:
  MapIoCode code_;
};

enum class MapPayloadKind : std::uint8_t {
  Reachability = 0,
  Inverted = 1,
  Distribution = 2,
};

/// Common prefix of every map file. The orientation set is stored as its
/// (n_dirs, n_rolls) parameters and regenerated on load; the sampler is
/// deterministic, so the parameters are the set.
struct MapFileHeader {
  std::uint16_t version = 1;
  ArmHash hash{};
  GridSpec grid{};
  std::uint32_t n_dirs = 0;
  std::uint32_t n_rolls = 0;
  MapPayloadKind payload_kind = MapPayloadKind::Reachability;
};

inline constexpr std::uint16_t kMapFormatVersion = 1;
inline constexpr char kMapMagic[4] = {'G', 'O', 'R', 'M'};

namespace detail {

class ByteWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u16(std::uint16_t v) {
    for (int i = 0; i < 2; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    u64(bits);
  }
  void f32(float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    u32(bits);
  }
  void bytes(const std::uint8_t* data, std::size_t n) {
    buf_.insert(buf_.end(), data, data + n);
  }
  void pose(const Pose& p) {
    for (int i = 0; i < 3; ++i) f64(p.translation[i]);
    f64(p.rotation.w());
    f64(p.rotation.x());
    f64(p.rotation.y());
    f64(p.rotation.z());
  }
  const std::vector<std::uint8_t>& data() const { return buf_; }

 private:
  std::vector<std::uint8_t> buf_;
};

class ByteReader {
 public:
  explicit ByteReader(std::vector<std::uint8_t> buf) : buf_(std::move(buf)) {}

  std::uint8_t u8() { return take(1)[0]; }
  std::uint16_t u16() {
    const std::uint8_t* p = take(2);
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
  }
  std::uint32_t u32() {
    const std::uint8_t* p = take(4);
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) |
           (static_cast<std::uint32_t>(p[3]) << 24);
  }
  std::uint64_t u64() {
    const std::uint8_t* p = take(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return v;
  }
  double f64() {
    std::uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
  }
  float f32() {
    std::uint32_t bits = u32();
    float v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
  }
  void bytes(std::uint8_t* out, std::size_t n) { std::memcpy(out, take(n), n); }
  /// Poses are stored normalized; reconstruct the exact bytes rather than
  /// renormalizing, which would shift the last ulp and break bit-stable
  /// round trips. Far-from-unit rotations mean a corrupt file.
  Pose pose() {
    Eigen::Vector3d t;
    for (int i = 0; i < 3; ++i) t[i] = f64();
    double w = f64(), x = f64(), y = f64(), z = f64();
    Eigen::Quaterniond q(w, x, y, z);
    const double n = q.norm();
    if (!std::isfinite(n) || std::abs(n - 1.0) > 1e-9 || !t.allFinite()) {
      throw MapIoError(MapIoCode::SizeMismatch, "stored pose is not normalized");
    }
    Pose p;
    p.translation = t;
    p.rotation = q;
    return p;
  }
  std::size_t remaining() const { return buf_.size() - pos_; }
  void expect_end() const {
    if (pos_ != buf_.size()) {
      throw MapIoError(MapIoCode::SizeMismatch,
                       "map file has " + std::to_string(buf_.size() - pos_) +
                           " trailing bytes");
    }
  }

 private:
  const std::uint8_t* take(std::size_t n) {
    if (pos_ + n > buf_.size()) {
      throw MapIoError(MapIoCode::Truncated, "map file ends mid-field");
    }
    const std::uint8_t* p = buf_.data() + pos_;
    pos_ += n;
    return p;
  }

  std::vector<std::uint8_t> buf_;
  std::size_t pos_ = 0;
};

inline void write_header(ByteWriter& w, const MapFileHeader& h) {
  w.bytes(reinterpret_cast<const std::uint8_t*>(kMapMagic), 4);
  w.u16(h.version);
  w.bytes(h.hash.data(), h.hash.size());
  for (int i = 0; i < 3; ++i) w.f64(h.grid.origin[i]);
  w.f64(h.grid.spacing);
  for (int i = 0; i < 3; ++i) w.u32(h.grid.dims[static_cast<std::size_t>(i)]);
  w.u32(h.n_dirs);
  w.u32(h.n_rolls);
  w.u8(static_cast<std::uint8_t>(h.payload_kind));
}

inline MapFileHeader read_header(ByteReader& r, MapPayloadKind expected) {
  char magic[4];
  r.bytes(reinterpret_cast<std::uint8_t*>(magic), 4);
  if (std::memcmp(magic, kMapMagic, 4) != 0) {
    throw MapIoError(MapIoCode::BadMagic, "not a map file (bad magic)");
  }
  MapFileHeader h;
  h.version = r.u16();
  if (h.version != kMapFormatVersion) {
    throw MapIoError(MapIoCode::UnsupportedVersion,
                     "map format version " + std::to_string(h.version) +
                         " is not supported (expected " +
                         std::to_string(kMapFormatVersion) + ")");
  }
  r.bytes(h.hash.data(), h.hash.size());
  for (int i = 0; i < 3; ++i) h.grid.origin[i] = r.f64();
  h.grid.spacing = r.f64();
  for (int i = 0; i < 3; ++i) h.grid.dims[static_cast<std::size_t>(i)] = r.u32();
  h.n_dirs = r.u32();
  h.n_rolls = r.u32();
  std::uint8_t kind = r.u8();
  if (kind > 2) {
    throw MapIoError(MapIoCode::SizeMismatch,
                     "unknown payload kind " + std::to_string(kind));
  }
  h.payload_kind = static_cast<MapPayloadKind>(kind);
  if (h.payload_kind != expected) {
    throw MapIoError(MapIoCode::SizeMismatch,
                     "payload kind " + std::to_string(kind) + " does not match loader");
  }
  try {
    h.grid.validate();
  } catch (const std::invalid_argument& e) {
    throw MapIoError(MapIoCode::SizeMismatch, std::string("bad grid in header: ") + e.what());
  }
  if (h.n_dirs == 0 || h.n_rolls == 0) {
    throw MapIoError(MapIoCode::SizeMismatch, "orientation counts must be positive");
  }
  return h;
}

inline std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MapIoError(MapIoCode::Io, "cannot open " + path.string());
  std::vector<std::uint8_t> buf((std::istreambuf_iterator<char>(in)),
                                std::istreambuf_iterator<char>());
  if (in.bad()) throw MapIoError(MapIoCode::Io, "read error on " + path.string());
  return buf;
}

/// Writes via a sibling temp file and renames over the destination, so a
/// crash never leaves a half-written map at the final path.
inline void write_file(const std::filesystem::path& path,
                       const std::vector<std::uint8_t>& buf) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw MapIoError(MapIoCode::Io, "cannot open " + tmp.string());
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size()));
    if (!out) throw MapIoError(MapIoCode::Io, "write error on " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw MapIoError(MapIoCode::Io, "cannot move map into place at " + path.string());
  }
}

}  // namespace detail

inline void save_rm(const std::filesystem::path& path, const ReachabilityMap& rm) {
  detail::ByteWriter w;
  MapFileHeader h;
  h.version = kMapFormatVersion;
  h.hash = rm.hash;
  h.grid = rm.grid;
  h.n_dirs = rm.orientations.n_dirs;
  h.n_rolls = rm.orientations.n_rolls;
  h.payload_kind = MapPayloadKind::Reachability;
  detail::write_header(w, h);
  for (std::uint64_t word : rm.bitmask) w.u64(word);
  for (float v : rm.index) w.f32(v);
  detail::write_file(path, w.data());
}

inline ReachabilityMap load_rm(const std::filesystem::path& path) {
  detail::ByteReader r(detail::read_file(path));
  MapFileHeader h = detail::read_header(r, MapPayloadKind::Reachability);
  ReachabilityMap rm;
  rm.grid = h.grid;
  rm.hash = h.hash;
  rm.orientations = sample_orientations(h.n_dirs, h.n_rolls);
  const std::size_t n_vox = rm.grid.voxel_count();
  const std::size_t expected = n_vox * rm.words_per_voxel() * 8 + n_vox * 4;
  if (r.remaining() < expected) {
    throw MapIoError(MapIoCode::Truncated, "payload shorter than the header implies");
  }
  if (r.remaining() > expected) {
    throw MapIoError(MapIoCode::SizeMismatch, "payload longer than the header implies");
  }
  rm.bitmask.resize(n_vox * rm.words_per_voxel());
  rm.index.resize(n_vox);
  for (std::uint64_t& word : rm.bitmask) word = r.u64();
  for (float& v : rm.index) v = r.f32();
  r.expect_end();
  return rm;
}

struct OrmFile {
  MapFileHeader header;
  std::vector<OrmEntry> entries;
};

inline void save_orm(const std::filesystem::path& path, const MapFileHeader& source,
                     const std::vector<OrmEntry>& entries) {
  detail::ByteWriter w;
  MapFileHeader h = source;
  h.version = kMapFormatVersion;
  h.payload_kind = MapPayloadKind::Inverted;
  detail::write_header(w, h);
  w.u64(entries.size());
  for (const OrmEntry& e : entries) {
    w.pose(e.base_in_tcp);
    w.f64(e.score);
  }
  detail::write_file(path, w.data());
}

inline OrmFile load_orm(const std::filesystem::path& path) {
  detail::ByteReader r(detail::read_file(path));
  OrmFile file;
  file.header = detail::read_header(r, MapPayloadKind::Inverted);
  std::uint64_t count = r.u64();
  constexpr std::size_t kEntryBytes = 8 * 8;  // pose (7 f64) + score
  if (count > r.remaining() / kEntryBytes) {
    throw MapIoError(MapIoCode::Truncated, "entry count exceeds file size");
  }
  file.entries.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    OrmEntry e;
    e.base_in_tcp = r.pose();
    e.score = r.f64();
    file.entries.push_back(e);
  }
  r.expect_end();
  return file;
}

struct GormFile {
  MapFileHeader header;
  GormDistribution dist;
};

inline void save_gorm(const std::filesystem::path& path, const MapFileHeader& source,
                      const GormDistribution& dist) {
  detail::ByteWriter w;
  MapFileHeader h = source;
  h.version = kMapFormatVersion;
  h.payload_kind = MapPayloadKind::Distribution;
  detail::write_header(w, h);
  w.pose(dist.target);
  w.f64(dist.reach_threshold);
  w.u64(dist.candidates.size());
  for (const GormCandidate& c : dist.candidates) {
    w.pose(c.base_in_target);
    w.f64(c.score);
  }
  detail::write_file(path, w.data());
}

inline GormFile load_gorm(const std::filesystem::path& path) {
  detail::ByteReader r(detail::read_file(path));
  GormFile file;
  file.header = detail::read_header(r, MapPayloadKind::Distribution);
  file.dist.target = r.pose();
  file.dist.reach_threshold = r.f64();
  std::uint64_t count = r.u64();
  constexpr std::size_t kEntryBytes = 8 * 8;
  if (count > r.remaining() / kEntryBytes) {
    throw MapIoError(MapIoCode::Truncated, "candidate count exceeds file size");
  }
  file.dist.candidates.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    GormCandidate c;
    c.base_in_target = r.pose();
    c.score = r.f64();
    file.dist.candidates.push_back(c);
  }
  r.expect_end();
  file.dist.rebuild_world_cache();
  return file;
}

using MapPayload = std::variant<ReachabilityMap, OrmFile, GormFile>;

/// Loads any map file, dispatching on the payload kind in its header.
inline MapPayload load_map(const std::filesystem::path& path) {
  {
    detail::ByteReader peek(detail::read_file(path));
    char magic[4];
    peek.bytes(reinterpret_cast<std::uint8_t*>(magic), 4);
    if (std::memcmp(magic, kMapMagic, 4) != 0) {
      throw MapIoError(MapIoCode::BadMagic, "not a map file (bad magic)");
    }
    std::uint16_t version = peek.u16();
    if (version != kMapFormatVersion) {
      throw MapIoError(MapIoCode::UnsupportedVersion,
                       "map format version " + std::to_string(version) +
                           " is not supported");
    }
    // Skip hash, grid, and orientation counts to reach the kind byte.
    std::array<std::uint8_t, 32 + 4 * 8 + 3 * 4 + 2 * 4> skip{};
    peek.bytes(skip.data(), skip.size());
    switch (peek.u8()) {
      case 0:
        break;
      case 1:
        return load_orm(path);
      case 2:
        return load_gorm(path);
      default:
        throw MapIoError(MapIoCode::SizeMismatch, "unknown payload kind");
    }
  }
  return load_rm(path);
}

inline void save_map(const std::filesystem::path& path, const MapPayload& map) {
  if (const auto* rm = std::get_if<ReachabilityMap>(&map)) {
    save_rm(path, *rm);
  } else if (const auto* orm = std::get_if<OrmFile>(&map)) {
    save_orm(path, orm->header, orm->entries);
  } else {
    const auto& g = std::get<GormFile>(map);
    save_gorm(path, g.header, g.dist);
  }
}

}  // namespace gorm
