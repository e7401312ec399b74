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

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gorm/arm.hpp"
#include "gorm/command.hpp"
#include "gorm/gorm.hpp"
#include "gorm/planner.hpp"
#include "gorm/rmap.hpp"
#include "gorm/sim.hpp"

namespace gorm {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct BenchConfig {
  std::vector<double> heights{0.0, 0.3, 0.75, 1.0};
  int trials = 500;
  double naive_standoff = 0.5;
};

struct WorkspaceConfig {
  double threshold = 0.2;
  int height_samples = 7;
  int pitch_samples = 7;
};

/// Everything a run needs, grouped the same way the JSON file is. Every
/// field has a default, so an empty JSON object is a valid config; unknown
/// keys anywhere are rejected by name.
struct RunConfig {
  ArmModel arm = default_arm();
  GridSpec grid{};
  std::uint32_t n_dirs = 16;
  std::uint32_t n_rolls = 4;
  RmBuildParams rm_build{};
  LocomotionLimits limits{};
  Environment env{};
  PlannerParams planner{};
  Scenario scenario{};
  BenchConfig bench{};
  WorkspaceConfig workspace{};
};

inline RunConfig default_config() { return RunConfig{}; }

namespace detail {

using json = nlohmann::json;

inline std::string join_path(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

inline void check_keys(const json& obj, const std::string& path,
                       std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) {
    throw ConfigError("config: " + (path.empty() ? std::string("top level") : path) +
                      " must be an object");
  }
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed) {
      if (item.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ConfigError("config: unknown key '" + join_path(path, item.key()) + "'");
    }
  }
}

inline void get_num(const json& obj, const std::string& path, const char* key,
                    double& out) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_number()) {
    throw ConfigError("config: '" + join_path(path, key) + "' must be a number");
  }
  out = v.get<double>();
}

inline void get_int(const json& obj, const std::string& path, const char* key,
                    int& out) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) {
    throw ConfigError("config: '" + join_path(path, key) + "' must be an integer");
  }
  out = v.get<int>();
}

inline void get_u32(const json& obj, const std::string& path, const char* key,
                    std::uint32_t& out) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw ConfigError("config: '" + join_path(path, key) +
                      "' must be a non-negative integer");
  }
  out = v.get<std::uint32_t>();
}

inline void get_u64(const json& obj, const std::string& path, const char* key,
                    std::uint64_t& out) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw ConfigError("config: '" + join_path(path, key) +
                      "' must be a non-negative integer");
  }
  out = v.get<std::uint64_t>();
}

inline Eigen::VectorXd get_fixed_array(const json& v, const std::string& where,
                                       std::size_t n) {
  if (!v.is_array() || v.size() != n) {
    throw ConfigError("config: '" + where + "' must be an array of " +
                      std::to_string(n) + " numbers");
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (!v[i].is_number()) {
      throw ConfigError("config: '" + where + "' must be an array of " +
                        std::to_string(n) + " numbers");
    }
    out[static_cast<Eigen::Index>(i)] = v[i].get<double>();
  }
  return out;
}

inline void get_vec3(const json& obj, const std::string& path, const char* key,
                     Eigen::Vector3d& out) {
  if (!obj.contains(key)) return;
  Eigen::VectorXd v = get_fixed_array(obj.at(key), join_path(path, key), 3);
  out = v.head<3>();
}

inline void get_vec2(const json& obj, const std::string& path, const char* key,
                     Eigen::Vector2d& out) {
  if (!obj.contains(key)) return;
  Eigen::VectorXd v = get_fixed_array(obj.at(key), join_path(path, key), 2);
  out = v.head<2>();
}

inline void get_interval(const json& obj, const std::string& path, const char* key,
                         double& lo, double& hi) {
  if (!obj.contains(key)) return;
  Eigen::VectorXd v = get_fixed_array(obj.at(key), join_path(path, key), 2);
  lo = v[0];
  hi = v[1];
}

inline Pose parse_pose(const json& v, const std::string& path) {
  check_keys(v, path, {"xyz", "rpy", "quat"});
  if (v.contains("rpy") && v.contains("quat")) {
    throw ConfigError("config: '" + path + "' must not set both 'rpy' and 'quat'");
  }
  Eigen::Vector3d xyz = Eigen::Vector3d::Zero();
  get_vec3(v, path, "xyz", xyz);
  if (v.contains("quat")) {
    Eigen::VectorXd q = get_fixed_array(v.at("quat"), join_path(path, "quat"), 4);
    return Pose(xyz, Eigen::Quaterniond(q[0], q[1], q[2], q[3]));
  }
  Eigen::Vector3d rpy = Eigen::Vector3d::Zero();
  get_vec3(v, path, "rpy", rpy);
  return Pose::from_xyz_rpy(xyz, rpy);
}

inline void get_pose(const json& obj, const std::string& path, const char* key,
                     Pose& out) {
  if (!obj.contains(key)) return;
  out = parse_pose(obj.at(key), join_path(path, key));
}

inline Aabb parse_aabb(const json& v, const std::string& path) {
  check_keys(v, path, {"min", "max"});
  Aabb box;
  get_vec3(v, path, "min", box.min);
  get_vec3(v, path, "max", box.max);
  return box;
}

inline ArmModel parse_arm(const json& v, const std::string& path, ArmModel base) {
  check_keys(v, path, {"joints", "tcp_offset", "mount"});
  if (v.contains("joints")) {
    const json& joints = v.at("joints");
    if (!joints.is_array() || joints.empty()) {
      throw ConfigError("config: '" + join_path(path, "joints") +
                        "' must be a non-empty array");
    }
    base.joints.clear();
    for (std::size_t i = 0; i < joints.size(); ++i) {
      std::string jpath = join_path(path, "joints[" + std::to_string(i) + "]");
      check_keys(joints[i], jpath, {"axis", "origin", "limits"});
      Joint joint;
      get_vec3(joints[i], jpath, "axis", joint.axis);
      get_pose(joints[i], jpath, "origin", joint.origin);
      get_interval(joints[i], jpath, "limits", joint.lower, joint.upper);
      base.joints.push_back(joint);
    }
  }
  get_pose(v, path, "tcp_offset", base.tcp_offset);
  get_pose(v, path, "mount", base.mount);
  return base;
}

}  // namespace detail

/// Parses a config object on top of the defaults. Missing keys keep their
/// default; unknown keys anywhere raise ConfigError naming the full path.
inline RunConfig parse_config(const nlohmann::json& root) {
  using detail::check_keys;
  using detail::join_path;
  RunConfig cfg;

  check_keys(root, "",
             {"arm", "grid", "orientations", "ik", "rm_build", "limits", "environment",
              "planner", "speed", "scenario", "bench", "workspace"});

  if (root.contains("arm")) cfg.arm = detail::parse_arm(root.at("arm"), "arm", cfg.arm);

  if (root.contains("grid")) {
    const auto& g = root.at("grid");
    check_keys(g, "grid", {"origin", "spacing", "dims"});
    detail::get_vec3(g, "grid", "origin", cfg.grid.origin);
    detail::get_num(g, "grid", "spacing", cfg.grid.spacing);
    if (g.contains("dims")) {
      Eigen::VectorXd dims = detail::get_fixed_array(g.at("dims"), "grid.dims", 3);
      for (int i = 0; i < 3; ++i) {
        if (dims[i] < 1 || dims[i] != std::floor(dims[i])) {
          throw ConfigError("config: 'grid.dims' must be positive integers");
        }
        cfg.grid.dims[static_cast<std::size_t>(i)] =
            static_cast<std::uint32_t>(dims[i]);
      }
    }
  }

  if (root.contains("orientations")) {
    const auto& o = root.at("orientations");
    check_keys(o, "orientations", {"n_dirs", "n_rolls"});
    detail::get_u32(o, "orientations", "n_dirs", cfg.n_dirs);
    detail::get_u32(o, "orientations", "n_rolls", cfg.n_rolls);
  }

  if (root.contains("ik")) {
    const auto& k = root.at("ik");
    check_keys(k, "ik", {"damping", "max_iters", "pos_tol", "rot_tol", "step_clamp"});
    detail::get_num(k, "ik", "damping", cfg.rm_build.ik.damping);
    detail::get_int(k, "ik", "max_iters", cfg.rm_build.ik.max_iters);
    detail::get_num(k, "ik", "pos_tol", cfg.rm_build.ik.pos_tol);
    detail::get_num(k, "ik", "rot_tol", cfg.rm_build.ik.rot_tol);
    detail::get_num(k, "ik", "step_clamp", cfg.rm_build.ik.step_clamp);
  }

  if (root.contains("rm_build")) {
    const auto& b = root.at("rm_build");
    check_keys(b, "rm_build", {"seeds_per_pose", "seed", "threads"});
    detail::get_int(b, "rm_build", "seeds_per_pose", cfg.rm_build.seeds_per_pose);
    detail::get_u64(b, "rm_build", "seed", cfg.rm_build.seed);
    detail::get_int(b, "rm_build", "threads", cfg.rm_build.threads);
  }

  if (root.contains("limits")) {
    const auto& l = root.at("limits");
    check_keys(l, "limits",
               {"height", "pitch", "roll_tolerance", "planar_origin", "planar_range"});
    detail::get_interval(l, "limits", "height", cfg.limits.height_min,
                         cfg.limits.height_max);
    detail::get_interval(l, "limits", "pitch", cfg.limits.pitch_min,
                         cfg.limits.pitch_max);
    detail::get_num(l, "limits", "roll_tolerance", cfg.limits.roll_tolerance);
    detail::get_vec2(l, "limits", "planar_origin", cfg.limits.planar_origin);
    if (l.contains("planar_range")) {
      const auto& pr = l.at("planar_range");
      if (pr.is_null()) {
        cfg.limits.planar_range = std::numeric_limits<double>::infinity();
      } else if (pr.is_number()) {
        cfg.limits.planar_range = pr.get<double>();
      } else {
        throw ConfigError("config: 'limits.planar_range' must be a number or null");
      }
    }
  }

  if (root.contains("environment")) {
    const auto& e = root.at("environment");
    check_keys(e, "environment", {"ground_height", "boxes", "robot_body"});
    detail::get_num(e, "environment", "ground_height", cfg.env.ground_height);
    if (e.contains("boxes")) {
      const auto& boxes = e.at("boxes");
      if (!boxes.is_array()) {
        throw ConfigError("config: 'environment.boxes' must be an array");
      }
      cfg.env.boxes.clear();
      for (std::size_t i = 0; i < boxes.size(); ++i) {
        cfg.env.boxes.push_back(detail::parse_aabb(
            boxes[i], "environment.boxes[" + std::to_string(i) + "]"));
      }
    }
    if (e.contains("robot_body")) {
      cfg.env.robot_body = detail::parse_aabb(e.at("robot_body"), "environment.robot_body");
    }
  }

  if (root.contains("planner")) {
    const auto& p = root.at("planner");
    check_keys(p, "planner",
               {"kp_lin", "kp_yaw", "lambda", "switch_threshold", "switch_hysteresis",
                "candidate_stickiness", "reach_threshold"});
    detail::get_num(p, "planner", "kp_lin", cfg.planner.kp_lin);
    detail::get_num(p, "planner", "kp_yaw", cfg.planner.kp_yaw);
    detail::get_num(p, "planner", "lambda", cfg.planner.lambda);
    detail::get_num(p, "planner", "switch_threshold", cfg.planner.switch_threshold);
    detail::get_num(p, "planner", "switch_hysteresis", cfg.planner.switch_hysteresis);
    detail::get_num(p, "planner", "candidate_stickiness",
                    cfg.planner.candidate_stickiness);
    detail::get_num(p, "planner", "reach_threshold", cfg.planner.reach_threshold);
  }

  if (root.contains("speed")) {
    const auto& s = root.at("speed");
    check_keys(s, "speed", {"vx_max", "vy_max", "omega_max", "edge_pitch"});
    detail::get_num(s, "speed", "vx_max", cfg.planner.speed.vx_max);
    detail::get_num(s, "speed", "vy_max", cfg.planner.speed.vy_max);
    detail::get_num(s, "speed", "omega_max", cfg.planner.speed.omega_max);
    detail::get_num(s, "speed", "edge_pitch", cfg.planner.speed.edge_pitch);
  }

  if (root.contains("scenario")) {
    const auto& s = root.at("scenario");
    check_keys(s, "scenario",
               {"seed", "target_height", "target_xy_range", "target_yaw_range",
                "approach_cone", "spawn_radius", "max_steps", "dt", "h_rate",
                "theta_rate"});
    detail::get_u64(s, "scenario", "seed", cfg.scenario.seed);
    detail::get_num(s, "scenario", "target_height", cfg.scenario.target_height);
    detail::get_num(s, "scenario", "target_xy_range", cfg.scenario.target_xy_range);
    detail::get_num(s, "scenario", "target_yaw_range", cfg.scenario.target_yaw_range);
    detail::get_num(s, "scenario", "approach_cone", cfg.scenario.approach_cone);
    detail::get_interval(s, "scenario", "spawn_radius", cfg.scenario.spawn_radius_min,
                         cfg.scenario.spawn_radius_max);
    detail::get_int(s, "scenario", "max_steps", cfg.scenario.max_steps);
    detail::get_num(s, "scenario", "dt", cfg.scenario.dt);
    detail::get_num(s, "scenario", "h_rate", cfg.scenario.h_rate);
    detail::get_num(s, "scenario", "theta_rate", cfg.scenario.theta_rate);
  }

  if (root.contains("bench")) {
    const auto& b = root.at("bench");
    check_keys(b, "bench", {"heights", "trials", "naive_standoff"});
    if (b.contains("heights")) {
      const auto& hs = b.at("heights");
      if (!hs.is_array() || hs.empty()) {
        throw ConfigError("config: 'bench.heights' must be a non-empty array");
      }
      cfg.bench.heights.clear();
      for (std::size_t i = 0; i < hs.size(); ++i) {
        if (!hs[i].is_number()) {
          throw ConfigError("config: 'bench.heights' must contain numbers");
        }
        cfg.bench.heights.push_back(hs[i].get<double>());
      }
    }
    detail::get_int(b, "bench", "trials", cfg.bench.trials);
    detail::get_num(b, "bench", "naive_standoff", cfg.bench.naive_standoff);
  }

  if (root.contains("workspace")) {
    const auto& w = root.at("workspace");
    check_keys(w, "workspace", {"threshold", "height_samples", "pitch_samples"});
    detail::get_num(w, "workspace", "threshold", cfg.workspace.threshold);
    detail::get_int(w, "workspace", "height_samples", cfg.workspace.height_samples);
    detail::get_int(w, "workspace", "pitch_samples", cfg.workspace.pitch_samples);
  }

  cfg.arm.validate();
  cfg.grid.validate();
  cfg.rm_build.validate();
  cfg.limits.validate();
  cfg.planner.validate();
  cfg.scenario.validate();
  return cfg;
}

inline RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config: " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(root);
}

namespace detail {

inline json pose_to_json(const Pose& p) {
  return json{{"xyz", {p.translation.x(), p.translation.y(), p.translation.z()}},
              {"quat",
               {p.rotation.w(), p.rotation.x(), p.rotation.y(), p.rotation.z()}}};
}

inline json aabb_to_json(const Aabb& b) {
  return json{{"min", {b.min.x(), b.min.y(), b.min.z()}},
              {"max", {b.max.x(), b.max.y(), b.max.z()}}};
}

}  // namespace detail

/// Inverse of parse_config for the fields it reads; parse(to_json(c))
/// reproduces c exactly.
inline nlohmann::json config_to_json(const RunConfig& cfg) {
  using detail::aabb_to_json;
  using detail::pose_to_json;
  nlohmann::json joints = nlohmann::json::array();
  for (const Joint& j : cfg.arm.joints) {
    joints.push_back({{"axis", {j.axis.x(), j.axis.y(), j.axis.z()}},
                      {"origin", pose_to_json(j.origin)},
                      {"limits", {j.lower, j.upper}}});
  }
  nlohmann::json boxes = nlohmann::json::array();
  for (const Aabb& b : cfg.env.boxes) boxes.push_back(aabb_to_json(b));

  nlohmann::json root{
      {"arm",
       {{"joints", joints},
        {"tcp_offset", pose_to_json(cfg.arm.tcp_offset)},
        {"mount", pose_to_json(cfg.arm.mount)}}},
      {"grid",
       {{"origin", {cfg.grid.origin.x(), cfg.grid.origin.y(), cfg.grid.origin.z()}},
        {"spacing", cfg.grid.spacing},
        {"dims", {cfg.grid.dims[0], cfg.grid.dims[1], cfg.grid.dims[2]}}}},
      {"orientations", {{"n_dirs", cfg.n_dirs}, {"n_rolls", cfg.n_rolls}}},
      {"ik",
       {{"damping", cfg.rm_build.ik.damping},
        {"max_iters", cfg.rm_build.ik.max_iters},
        {"pos_tol", cfg.rm_build.ik.pos_tol},
        {"rot_tol", cfg.rm_build.ik.rot_tol},
        {"step_clamp", cfg.rm_build.ik.step_clamp}}},
      {"rm_build",
       {{"seeds_per_pose", cfg.rm_build.seeds_per_pose},
        {"seed", cfg.rm_build.seed},
        {"threads", cfg.rm_build.threads}}},
      {"limits",
       {{"height", {cfg.limits.height_min, cfg.limits.height_max}},
        {"pitch", {cfg.limits.pitch_min, cfg.limits.pitch_max}},
        {"roll_tolerance", cfg.limits.roll_tolerance},
        {"planar_origin", {cfg.limits.planar_origin.x(), cfg.limits.planar_origin.y()}},
        {"planar_range", std::isinf(cfg.limits.planar_range)
                             ? nlohmann::json(nullptr)
                             : nlohmann::json(cfg.limits.planar_range)}}},
      {"environment",
       {{"ground_height", cfg.env.ground_height},
        {"boxes", boxes},
        {"robot_body", aabb_to_json(cfg.env.robot_body)}}},
      {"planner",
       {{"kp_lin", cfg.planner.kp_lin},
        {"kp_yaw", cfg.planner.kp_yaw},
        {"lambda", cfg.planner.lambda},
        {"switch_threshold", cfg.planner.switch_threshold},
        {"switch_hysteresis", cfg.planner.switch_hysteresis},
        {"candidate_stickiness", cfg.planner.candidate_stickiness},
        {"reach_threshold", cfg.planner.reach_threshold}}},
      {"speed",
       {{"vx_max", cfg.planner.speed.vx_max},
        {"vy_max", cfg.planner.speed.vy_max},
        {"omega_max", cfg.planner.speed.omega_max},
        {"edge_pitch", cfg.planner.speed.edge_pitch}}},
      {"scenario",
       {{"seed", cfg.scenario.seed},
        {"target_height", cfg.scenario.target_height},
        {"target_xy_range", cfg.scenario.target_xy_range},
        {"target_yaw_range", cfg.scenario.target_yaw_range},
        {"approach_cone", cfg.scenario.approach_cone},
        {"spawn_radius", {cfg.scenario.spawn_radius_min, cfg.scenario.spawn_radius_max}},
        {"max_steps", cfg.scenario.max_steps},
        {"dt", cfg.scenario.dt},
        {"h_rate", cfg.scenario.h_rate},
        {"theta_rate", cfg.scenario.theta_rate}}},
      {"bench",
       {{"heights", cfg.bench.heights},
        {"trials", cfg.bench.trials},
        {"naive_standoff", cfg.bench.naive_standoff}}},
      {"workspace",
       {{"threshold", cfg.workspace.threshold},
        {"height_samples", cfg.workspace.height_samples},
        {"pitch_samples", cfg.workspace.pitch_samples}}}};
  return root;
}

}  // namespace gorm
