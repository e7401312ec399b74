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

// Command-line front end: build and invert reachability maps, run approach
// episodes and benchmarks, and query map files.
//
// Exit codes: 0 success, 1 usage or config error, 2 map data or format
// error (including an arm hash mismatch), 3 empty candidate distribution.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "gorm/config.hpp"
#include "gorm/serialize.hpp"
#include "gorm/sim.hpp"
#include "gorm/workspace.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitEmpty = 3;

struct CliOptions {
  std::string config_path;
  std::string map_path;
  std::string orm_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string mode = "both";
  std::optional<int> trials;
  std::vector<double> point;
};

gorm::RunConfig load_effective_config(const CliOptions& opt) {
  gorm::RunConfig cfg = opt.config_path.empty() ? gorm::default_config()
                                                : gorm::load_config(opt.config_path);
  if (opt.seed) cfg.scenario.seed = *opt.seed;
  if (opt.threads) cfg.rm_build.threads = *opt.threads;
  if (opt.trials) cfg.bench.trials = *opt.trials;
  return cfg;
}

/// Loaded map files must match the arm the config describes; a map built
/// for a different arm is silently wrong everywhere, so it is an error here.
void require_matching_arm(const gorm::ArmHash& file_hash, const gorm::ArmModel& arm,
                          const std::string& path) {
  if (file_hash != gorm::arm_hash(arm)) {
    throw gorm::MapIoError(gorm::MapIoCode::SizeMismatch,
                           path + " was built for a different arm model");
  }
}

gorm::MapFileHeader header_for(const gorm::ReachabilityMap& rm) {
  gorm::MapFileHeader h;
  h.version = gorm::kMapFormatVersion;
  h.hash = rm.hash;
  h.grid = rm.grid;
  h.n_dirs = rm.orientations.n_dirs;
  h.n_rolls = rm.orientations.n_rolls;
  return h;
}

int cmd_build_rm(const CliOptions& opt) {
  gorm::RunConfig cfg = load_effective_config(opt);
  gorm::OrientationSet orient = gorm::sample_orientations(cfg.n_dirs, cfg.n_rolls);
  gorm::ReachabilityMap rm = gorm::build_rm(cfg.arm, cfg.grid, orient, cfg.rm_build);
  gorm::save_rm(opt.out_path, rm);

  std::size_t reachable_voxels = 0;
  double index_sum = 0.0;
  for (float v : rm.index) {
    if (v > 0.0f) ++reachable_voxels;
    index_sum += v;
  }
  std::printf("map: %zu voxels, %zu orientations, %zu reachable voxels, mean index %.6f\n",
              rm.grid.voxel_count(), rm.orientations.size(), reachable_voxels,
              index_sum / static_cast<double>(rm.grid.voxel_count()));
  std::printf("wrote %s\n", opt.out_path.c_str());
  return kExitOk;
}

int cmd_invert(const CliOptions& opt) {
  gorm::RunConfig cfg = load_effective_config(opt);
  gorm::ReachabilityMap rm = gorm::load_rm(opt.map_path);
  require_matching_arm(rm.hash, cfg.arm, opt.map_path);
  std::vector<gorm::OrmEntry> entries = gorm::invert_rm(rm, cfg.arm.mount);
  gorm::save_orm(opt.out_path, header_for(rm), entries);
  std::printf("inverted: %zu entries\n", entries.size());
  std::printf("wrote %s\n", opt.out_path.c_str());
  return kExitOk;
}

int cmd_plan(const CliOptions& opt) {
  gorm::RunConfig cfg = load_effective_config(opt);
  gorm::ReachabilityMap rm = gorm::load_rm(opt.map_path);
  require_matching_arm(rm.hash, cfg.arm, opt.map_path);
  gorm::OrmFile orm = gorm::load_orm(opt.orm_path);
  require_matching_arm(orm.header.hash, cfg.arm, opt.orm_path);

  gorm::EpisodeResult ep = gorm::run_episode(cfg.arm, rm, orm.entries, cfg.limits,
                                             cfg.env, cfg.planner, cfg.scenario);
  const char* outcome = ep.outcome == gorm::EpisodeOutcome::Switched  ? "switched"
                        : ep.outcome == gorm::EpisodeOutcome::TimedOut ? "timed_out"
                                                                       : "empty";
  std::printf("episode: outcome=%s steps=%d final_reachability=%.6f\n", outcome,
              ep.steps, ep.final_reachability);
  std::printf("final base: x=%.4f y=%.4f yaw=%.4f height=%.4f pitch=%.4f\n",
              ep.final_state.x, ep.final_state.y, ep.final_state.yaw,
              ep.final_state.height, ep.final_state.pitch);

  if (!opt.out_path.empty()) {
    std::ofstream out(opt.out_path, std::ios::trunc);
    if (!out) {
      std::fprintf(stderr, "error: cannot open %s\n", opt.out_path.c_str());
      return kExitUsage;
    }
    out << "step,dmin\n";
    char line[64];
    for (std::size_t i = 0; i < ep.dmin_trace.size(); ++i) {
      std::snprintf(line, sizeof(line), "%zu,%.6f\n", i, ep.dmin_trace[i]);
      out << line;
    }
  }
  return ep.outcome == gorm::EpisodeOutcome::Empty ? kExitEmpty : kExitOk;
}

void print_bench_rows(std::FILE* f, const std::vector<gorm::BenchRow>& rows) {
  std::fprintf(f, "height_m,mode,trials,mean_reachability,switch_rate,mean_steps\n");
  for (const gorm::BenchRow& r : rows) {
    std::fprintf(f, "%.3f,%s,%d,%.6f,%.6f,%.2f\n", r.height, r.mode.c_str(), r.trials,
                 r.mean_reachability, r.switch_rate, r.mean_steps);
  }
}

int cmd_bench(const CliOptions& opt) {
  gorm::RunConfig cfg = load_effective_config(opt);
  gorm::ReachabilityMap rm = gorm::load_rm(opt.map_path);
  require_matching_arm(rm.hash, cfg.arm, opt.map_path);
  gorm::OrmFile orm = gorm::load_orm(opt.orm_path);
  require_matching_arm(orm.header.hash, cfg.arm, opt.orm_path);

  std::vector<gorm::BenchRow> rows;
  auto run_mode = [&](gorm::BenchMode mode) {
    std::vector<gorm::BenchRow> r = gorm::run_benchmark(
        cfg.arm, rm, orm.entries, cfg.limits, cfg.env, cfg.planner, cfg.scenario,
        cfg.bench.heights, cfg.bench.trials, mode, cfg.bench.naive_standoff);
    rows.insert(rows.end(), r.begin(), r.end());
  };
  if (opt.mode == "gorm" || opt.mode == "both") run_mode(gorm::BenchMode::Gorm);
  if (opt.mode == "naive" || opt.mode == "both") run_mode(gorm::BenchMode::Naive);

  if (opt.out_path.empty()) {
    print_bench_rows(stdout, rows);
  } else {
    std::FILE* f = std::fopen(opt.out_path.c_str(), "w");
    if (!f) {
      std::fprintf(stderr, "error: cannot open %s\n", opt.out_path.c_str());
      return kExitUsage;
    }
    print_bench_rows(f, rows);
    std::fclose(f);
    std::printf("wrote %s\n", opt.out_path.c_str());
  }
  return kExitOk;
}

int cmd_workspace(const CliOptions& opt) {
  gorm::RunConfig cfg = load_effective_config(opt);
  gorm::ReachabilityMap rm = gorm::load_rm(opt.map_path);
  require_matching_arm(rm.hash, cfg.arm, opt.map_path);

  gorm::WorkspaceResult ws =
      gorm::workspace_hull(rm, cfg.arm.mount, cfg.limits, cfg.workspace.threshold,
                           cfg.workspace.height_samples, cfg.workspace.pitch_samples);
  std::printf("arm_hull: volume=%.6f m^3 area=%.6f m^2 vertices=%zu\n",
              ws.arm_hull.volume, ws.arm_hull.area, ws.arm_hull.vertices.size());
  std::printf("body_hull: volume=%.6f m^3 area=%.6f m^2 vertices=%zu\n",
              ws.body_hull.volume, ws.body_hull.area, ws.body_hull.vertices.size());
  std::printf("volume_ratio=%.6f\n", ws.volume_ratio);

  if (!opt.out_path.empty()) {
    std::FILE* f = std::fopen(opt.out_path.c_str(), "w");
    if (!f) {
      std::fprintf(stderr, "error: cannot open %s\n", opt.out_path.c_str());
      return kExitUsage;
    }
    std::fprintf(f, "quantity,value\n");
    std::fprintf(f, "arm_volume_m3,%.6f\n", ws.arm_hull.volume);
    std::fprintf(f, "arm_area_m2,%.6f\n", ws.arm_hull.area);
    std::fprintf(f, "body_volume_m3,%.6f\n", ws.body_hull.volume);
    std::fprintf(f, "body_area_m2,%.6f\n", ws.body_hull.area);
    std::fprintf(f, "volume_ratio,%.6f\n", ws.volume_ratio);
    std::fclose(f);
    std::printf("wrote %s\n", opt.out_path.c_str());
  }
  return kExitOk;
}

int cmd_query(const CliOptions& opt) {
  gorm::RunConfig cfg = load_effective_config(opt);
  gorm::ReachabilityMap rm = gorm::load_rm(opt.map_path);
  require_matching_arm(rm.hash, cfg.arm, opt.map_path);

  Eigen::Vector3d p(opt.point[0], opt.point[1], opt.point[2]);
  std::printf("index=%.6f\n", static_cast<double>(gorm::query_index(rm, p)));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orientation-resolved reachability maps and base placement planning"};
  app.require_subcommand(1);

  CliOptions opt;
  app.add_option("--config", opt.config_path, "JSON config file (defaults used if omitted)");
  app.add_option("--seed", opt.seed, "Override the scenario seed");
  app.add_option("--threads", opt.threads, "Override the build thread count");

  CLI::App* build = app.add_subcommand("build-rm", "Build a reachability map");
  build->add_option("--out", opt.out_path, "Output map file")->required();

  CLI::App* invert = app.add_subcommand("invert", "Invert a map into base placements");
  invert->add_option("--map", opt.map_path, "Reachability map file")->required();
  invert->add_option("--out", opt.out_path, "Output file")->required();

  CLI::App* plan = app.add_subcommand("plan", "Run one approach episode");
  plan->add_option("--map", opt.map_path, "Reachability map file")->required();
  plan->add_option("--orm", opt.orm_path, "Inverted map file")->required();
  plan->add_option("--out", opt.out_path, "Optional per-step CSV");

  CLI::App* bench = app.add_subcommand("bench", "Run the approach benchmark");
  bench->add_option("--map", opt.map_path, "Reachability map file")->required();
  bench->add_option("--orm", opt.orm_path, "Inverted map file")->required();
  bench->add_option("--mode", opt.mode, "gorm, naive, or both")
      ->check(CLI::IsMember({"gorm", "naive", "both"}));
  bench->add_option("--trials", opt.trials, "Trials per height");
  bench->add_option("--out", opt.out_path, "Output CSV (stdout if omitted)");

  CLI::App* workspace = app.add_subcommand("workspace", "Reachable workspace hulls");
  workspace->add_option("--map", opt.map_path, "Reachability map file")->required();
  workspace->add_option("--out", opt.out_path, "Optional summary CSV");

  CLI::App* query = app.add_subcommand("query", "Query the reachability index at a point");
  query->add_option("--map", opt.map_path, "Reachability map file")->required();
  query->add_option("--point", opt.point, "Point x y z in the arm-base frame")
      ->expected(3)
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (build->parsed()) return cmd_build_rm(opt);
    if (invert->parsed()) return cmd_invert(opt);
    if (plan->parsed()) return cmd_plan(opt);
    if (bench->parsed()) return cmd_bench(opt);
    if (workspace->parsed()) return cmd_workspace(opt);
    if (query->parsed()) return cmd_query(opt);
  } catch (const gorm::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const gorm::MapIoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  }
  return kExitUsage;
}
