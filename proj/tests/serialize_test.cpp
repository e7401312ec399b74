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

#include <gorm/arm.hpp>
#include <gorm/hash.hpp>
#include <gorm/rng.hpp>
#include <gorm/serialize.hpp>
#include <gtest/gtest.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <vector>

namespace {

namespace fs = std::filesystem;

using gorm::GormCandidate;
using gorm::GormDistribution;
using gorm::GormFile;
using gorm::load_gorm;
using gorm::load_map;
using gorm::load_orm;
using gorm::load_rm;
using gorm::MapFileHeader;
using gorm::MapIoCode;
using gorm::MapIoError;
using gorm::MapPayload;
using gorm::OrmEntry;
using gorm::OrmFile;
using gorm::Pose;
using gorm::ReachabilityMap;
using gorm::save_gorm;
using gorm::save_map;
using gorm::save_orm;
using gorm::save_rm;

// Header layout offsets, for targeted corruption.
constexpr std::size_t kOffVersion = 4;
constexpr std::size_t kOffDims = 70;
constexpr std::size_t kOffNDirs = 82;
constexpr std::size_t kOffKind = 90;

std::vector<std::uint8_t> slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::vector<std::uint8_t>((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
}

void spit(const fs::path& p, const std::vector<std::uint8_t>& buf) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size()));
}

MapIoCode thrown_code(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const MapIoError& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected a map io error";
  return MapIoCode::Io;
}

struct SerializeFixture : ::testing::Test {
  fs::path dir;
  ReachabilityMap rm;

  void SetUp() override {
    dir = fs::temp_directory_path() /
          ("map_io_test_" + std::to_string(::getpid()) + "_" +
           ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir);

    rm.grid = gorm::GridSpec{{-0.4, -0.4, -0.4}, 0.1, {5, 6, 7}};
    rm.orientations = gorm::sample_orientations(5, 3);
    rm.hash = gorm::arm_hash(gorm::default_arm());
    const std::size_t n_vox = rm.grid.voxel_count();
    rm.bitmask.assign(n_vox * rm.words_per_voxel(), 0);
    rm.index.assign(n_vox, 0.0f);
    gorm::Rng rng(gorm::derive_seed(7, 70, 0));
    for (std::size_t v = 0; v < n_vox; ++v) {
      for (std::size_t o = 0; o < rm.orientations.size(); ++o) {
        if (rng.uniform01() < 0.3) rm.set_bit(v, o);
      }
      rm.index[v] = static_cast<float>(rm.popcount(v)) /
                    static_cast<float>(rm.orientations.size());
    }
  }

  void TearDown() override {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }

  MapFileHeader header() const {
    MapFileHeader h;
    h.hash = rm.hash;
    h.grid = rm.grid;
    h.n_dirs = rm.orientations.n_dirs;
    h.n_rolls = rm.orientations.n_rolls;
    return h;
  }
};

TEST_F(SerializeFixture, ReachabilityMapRoundTripsByteIdentically) {
  const fs::path a = dir / "rm_a.bin";
  const fs::path b = dir / "rm_b.bin";
  save_rm(a, rm);
  ReachabilityMap loaded = load_rm(a);

  EXPECT_EQ(loaded.grid, rm.grid);
  EXPECT_EQ(loaded.hash, rm.hash);
  EXPECT_EQ(loaded.orientations.n_dirs, rm.orientations.n_dirs);
  EXPECT_EQ(loaded.orientations.n_rolls, rm.orientations.n_rolls);
  ASSERT_EQ(loaded.orientations.size(), rm.orientations.size());
  for (std::size_t o = 0; o < rm.orientations.size(); ++o) {
    EXPECT_EQ(loaded.orientations.quats[o].coeffs(), rm.orientations.quats[o].coeffs());
  }
  EXPECT_EQ(loaded.bitmask, rm.bitmask);
  EXPECT_EQ(loaded.index, rm.index);

  save_rm(b, loaded);
  EXPECT_EQ(slurp(a), slurp(b));
}

TEST_F(SerializeFixture, InvertedMapRoundTripsByteIdentically) {
  const fs::path a = dir / "orm_a.bin";
  const fs::path b = dir / "orm_b.bin";
  std::vector<OrmEntry> entries = gorm::invert_rm(rm, gorm::default_arm().mount);
  ASSERT_GT(entries.size(), 100u);

  save_orm(a, header(), entries);
  OrmFile loaded = load_orm(a);
  EXPECT_EQ(loaded.header.hash, rm.hash);
  EXPECT_EQ(loaded.header.grid, rm.grid);
  EXPECT_EQ(loaded.header.n_dirs, rm.orientations.n_dirs);
  ASSERT_EQ(loaded.entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    EXPECT_EQ(loaded.entries[i].base_in_tcp.translation,
              entries[i].base_in_tcp.translation);
    EXPECT_EQ(loaded.entries[i].base_in_tcp.rotation.coeffs(),
              entries[i].base_in_tcp.rotation.coeffs());
    EXPECT_EQ(loaded.entries[i].score, entries[i].score);
  }

  save_orm(b, loaded.header, loaded.entries);
  EXPECT_EQ(slurp(a), slurp(b));
}

TEST_F(SerializeFixture, DistributionRoundTripsAndRebuildsItsCache) {
  const fs::path a = dir / "gorm_a.bin";
  const fs::path b = dir / "gorm_b.bin";
  GormDistribution dist;
  dist.target = Pose::from_xyz_rpy({0.2, -0.1, 0.8}, {0.0, 0.3, 1.1});
  dist.reach_threshold = 0.25;
  gorm::Rng rng(gorm::derive_seed(7, 71, 0));
  for (int i = 0; i < 200; ++i) {
    Eigen::Quaterniond q(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                         rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    q.normalize();
    dist.candidates.push_back(GormCandidate{
        Pose({rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), rng.uniform(0.0, 1.0)}, q),
        rng.uniform01()});
  }
  dist.rebuild_world_cache();

  save_gorm(a, header(), dist);
  GormFile loaded = load_gorm(a);
  EXPECT_EQ(loaded.dist.target.translation, dist.target.translation);
  EXPECT_EQ(loaded.dist.reach_threshold, dist.reach_threshold);
  ASSERT_EQ(loaded.dist.size(), dist.size());
  EXPECT_EQ(loaded.dist.world_positions, dist.world_positions);
  EXPECT_EQ(loaded.dist.world_quats, dist.world_quats);

  save_gorm(b, loaded.header, loaded.dist);
  EXPECT_EQ(slurp(a), slurp(b));
}

TEST_F(SerializeFixture, LoadMapDispatchesOnThePayloadKind) {
  const fs::path rm_path = dir / "kind0.bin";
  const fs::path orm_path = dir / "kind1.bin";
  const fs::path gorm_path = dir / "kind2.bin";
  save_rm(rm_path, rm);
  save_orm(orm_path, header(), gorm::invert_rm(rm, Pose::identity()));
  GormDistribution dist;
  dist.target = Pose::from_translation(0, 0, 0.8);
  dist.candidates.push_back(GormCandidate{Pose::from_translation(0.5, 0, 0.4), 0.5});
  dist.rebuild_world_cache();
  save_gorm(gorm_path, header(), dist);

  EXPECT_TRUE(std::holds_alternative<ReachabilityMap>(load_map(rm_path)));
  EXPECT_TRUE(std::holds_alternative<OrmFile>(load_map(orm_path)));
  EXPECT_TRUE(std::holds_alternative<GormFile>(load_map(gorm_path)));

  // save_map round-trips each alternative.
  const fs::path again = dir / "again.bin";
  save_map(again, load_map(rm_path));
  EXPECT_EQ(slurp(again), slurp(rm_path));
  save_map(again, load_map(orm_path));
  EXPECT_EQ(slurp(again), slurp(orm_path));
  save_map(again, load_map(gorm_path));
  EXPECT_EQ(slurp(again), slurp(gorm_path));
}

TEST_F(SerializeFixture, BadMagicIsReported) {
  const fs::path p = dir / "rm.bin";
  save_rm(p, rm);
  auto buf = slurp(p);
  buf[0] = 'X';
  spit(p, buf);
  EXPECT_EQ(thrown_code([&] { load_rm(p); }), MapIoCode::BadMagic);
  EXPECT_EQ(thrown_code([&] { load_map(p); }), MapIoCode::BadMagic);
}

TEST_F(SerializeFixture, UnsupportedVersionIsReported) {
  const fs::path p = dir / "rm.bin";
  save_rm(p, rm);
  auto buf = slurp(p);
  buf[kOffVersion] = 2;
  spit(p, buf);
  EXPECT_EQ(thrown_code([&] { load_rm(p); }), MapIoCode::UnsupportedVersion);
  EXPECT_EQ(thrown_code([&] { load_map(p); }), MapIoCode::UnsupportedVersion);
}

TEST_F(SerializeFixture, TruncationIsReportedAtAnyCut) {
  const fs::path full = dir / "rm.bin";
  save_rm(full, rm);
  const auto buf = slurp(full);
  const fs::path cut = dir / "cut.bin";

  // Mid-header, right after the magic, and mid-payload.
  for (std::size_t keep : {5ul, 40ul, buf.size() - 1}) {
    spit(cut, std::vector<std::uint8_t>(buf.begin(), buf.begin() + static_cast<long>(keep)));
    EXPECT_EQ(thrown_code([&] { load_rm(cut); }), MapIoCode::Truncated) << keep;
  }

  // An inverted map whose declared entry count exceeds the bytes present.
  const fs::path orm_path = dir / "orm.bin";
  save_orm(orm_path, header(), {OrmEntry{Pose::identity(), 1.0}});
  auto obuf = slurp(orm_path);
  obuf.resize(obuf.size() - 8);
  spit(orm_path, obuf);
  EXPECT_EQ(thrown_code([&] { load_orm(orm_path); }), MapIoCode::Truncated);
}

TEST_F(SerializeFixture, SizeMismatchIsReportedForExtraOrForeignBytes) {
  const fs::path p = dir / "rm.bin";
  save_rm(p, rm);
  auto buf = slurp(p);
  auto extra = buf;
  extra.push_back(0);
  extra.push_back(0);
  extra.push_back(0);
  extra.push_back(0);
  spit(p, extra);
  EXPECT_EQ(thrown_code([&] { load_rm(p); }), MapIoCode::SizeMismatch);

  // Wrong loader for the kind.
  spit(p, buf);
  EXPECT_EQ(thrown_code([&] { load_orm(p); }), MapIoCode::SizeMismatch);
  EXPECT_EQ(thrown_code([&] { load_gorm(p); }), MapIoCode::SizeMismatch);

  // Unknown kind byte.
  auto bad_kind = buf;
  bad_kind[kOffKind] = 7;
  spit(p, bad_kind);
  EXPECT_EQ(thrown_code([&] { load_rm(p); }), MapIoCode::SizeMismatch);
  EXPECT_EQ(thrown_code([&] { load_map(p); }), MapIoCode::SizeMismatch);

  // Zeroed orientation counts and zeroed grid dims are header corruption.
  auto no_dirs = buf;
  for (int i = 0; i < 4; ++i) no_dirs[kOffNDirs + static_cast<std::size_t>(i)] = 0;
  spit(p, no_dirs);
  EXPECT_EQ(thrown_code([&] { load_rm(p); }), MapIoCode::SizeMismatch);

  auto no_dims = buf;
  for (int i = 0; i < 4; ++i) no_dims[kOffDims + static_cast<std::size_t>(i)] = 0;
  spit(p, no_dims);
  EXPECT_EQ(thrown_code([&] { load_rm(p); }), MapIoCode::SizeMismatch);
}

TEST_F(SerializeFixture, IoErrorsAreReported) {
  EXPECT_EQ(thrown_code([&] { load_rm(dir / "missing.bin"); }), MapIoCode::Io);
  EXPECT_EQ(thrown_code([&] { load_map(dir / "missing.bin"); }), MapIoCode::Io);
  EXPECT_EQ(thrown_code([&] { save_rm(dir / "no_such_dir" / "rm.bin", rm); }),
            MapIoCode::Io);
}

TEST_F(SerializeFixture, WritesAreAtomicAndOverwriteCleanly) {
  const fs::path p = dir / "rm.bin";
  save_rm(p, rm);
  EXPECT_FALSE(fs::exists(dir / "rm.bin.tmp"));
  const auto first = slurp(p);

  // Overwriting an existing file leaves the new content, no temp droppings.
  ReachabilityMap other = rm;
  other.index[0] = 0.123f;
  save_rm(p, other);
  EXPECT_FALSE(fs::exists(dir / "rm.bin.tmp"));
  const auto second = slurp(p);
  EXPECT_NE(first, second);
  EXPECT_EQ(load_rm(p).index[0], 0.123f);
}

}  // namespace
