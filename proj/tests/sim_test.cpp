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
#include <gorm/sim.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <optional>
#include <vector>

namespace {

using gorm::ArmModel;
using gorm::BaseState;
using gorm::base_pose;
using gorm::BenchMode;
using gorm::BenchRow;
using gorm::Command5D;
using gorm::default_arm;
using gorm::Environment;
using gorm::EpisodeOutcome;
using gorm::EpisodeResult;
using gorm::LocomotionLimits;
using gorm::OrmEntry;
using gorm::PlannerParams;
using gorm::Pose;
using gorm::run_benchmark;
using gorm::run_episode;
using gorm::run_naive_episode;
using gorm::Scenario;
using gorm::step_base;

// Map whose index is 1 inside a ball around the arm base and 0 outside, so
// reachability switches exactly when the target enters the ball.
gorm::ReachabilityMap ball_map(double radius) {
  gorm::ReachabilityMap rm;
  rm.grid = gorm::GridSpec{{-1.0, -1.0, -1.0}, 0.25, {8, 8, 8}};
  rm.orientations = gorm::sample_orientations(4, 2);
  rm.bitmask.assign(rm.grid.voxel_count() * rm.words_per_voxel(), 0);
  rm.index.resize(rm.grid.voxel_count());
  for (std::size_t v = 0; v < rm.index.size(); ++v) {
    rm.index[v] = rm.grid.voxel_center(v).norm() <= radius ? 1.0f : 0.0f;
  }
  return rm;
}

TEST(BasePose, ComposesYawThenPitchAtTheStateHeight) {
  BaseState s{1.0, -2.0, 0.7, 0.5, 0.2};
  Pose p = base_pose(s);
  EXPECT_NEAR(p.translation.x(), 1.0, 1e-15);
  EXPECT_NEAR(p.translation.y(), -2.0, 1e-15);
  EXPECT_NEAR(p.translation.z(), 0.5, 1e-15);
  Eigen::Vector3d rpy = p.rpy();
  EXPECT_NEAR(rpy[0], 0.0, 1e-12);
  EXPECT_NEAR(rpy[1], 0.2, 1e-12);
  EXPECT_NEAR(rpy[2], 0.7, 1e-12);
}

TEST(StepBase, IntegratesPlanarVelocityInTheBodyFrame) {
  BaseState s{0.0, 0.0, 0.0, 0.5, 0.0};
  Command5D cmd;
  cmd.vx = 1.0;
  BaseState out = step_base(s, cmd, 0.1);
  EXPECT_NEAR(out.x, 0.1, 1e-15);
  EXPECT_NEAR(out.y, 0.0, 1e-15);

  s.yaw = M_PI / 2.0;
  out = step_base(s, cmd, 0.1);
  EXPECT_NEAR(out.x, 0.0, 1e-15);
  EXPECT_NEAR(out.y, 0.1, 1e-15);

  Command5D side;
  side.vy = 0.5;
  s.yaw = 0.0;
  out = step_base(s, side, 0.2);
  EXPECT_NEAR(out.x, 0.0, 1e-15);
  EXPECT_NEAR(out.y, 0.1, 1e-15);
}

TEST(StepBase, TranslationUsesTheYawBeforeTheTurn) {
  BaseState s{0.0, 0.0, 0.0, 0.5, 0.0};
  Command5D cmd;
  cmd.vx = 1.0;
  cmd.omega = 10.0;
  BaseState out = step_base(s, cmd, 0.1);
  EXPECT_NEAR(out.x, 0.1, 1e-15);  // translation from the pre-turn heading
  EXPECT_NEAR(out.y, 0.0, 1e-15);
  EXPECT_NEAR(out.yaw, 1.0, 1e-15);
}

TEST(StepBase, YawWrapsToPi) {
  BaseState s{0.0, 0.0, 3.1, 0.5, 0.0};
  Command5D cmd;
  cmd.omega = 1.0;
  BaseState out = step_base(s, cmd, 0.1);
  EXPECT_NEAR(out.yaw, 3.2 - 2.0 * M_PI, 1e-12);
}

TEST(StepBase, HeightAndPitchSlewAtBoundedRates) {
  BaseState s{0.0, 0.0, 0.0, 0.40, 0.0};
  Command5D cmd;
  cmd.height = 0.60;
  cmd.pitch = -0.30;
  BaseState out = step_base(s, cmd, 0.1, 0.2, 0.5);
  EXPECT_NEAR(out.height, 0.42, 1e-15);  // 0.2 m/s cap
  EXPECT_NEAR(out.pitch, -0.05, 1e-15);  // 0.5 rad/s cap

  // Within one step of the setpoint: lands exactly on it.
  BaseState close{0.0, 0.0, 0.0, 0.595, -0.29};
  out = step_base(close, cmd, 0.1, 0.2, 0.5);
  EXPECT_NEAR(out.height, 0.60, 1e-15);
  EXPECT_NEAR(out.pitch, -0.30, 1e-15);
}

TEST(StepBase, RejectsBadTimeStepAndRates) {
  BaseState s;
  Command5D cmd;
  EXPECT_THROW(step_base(s, cmd, 0.0), std::invalid_argument);
  EXPECT_THROW(step_base(s, cmd, -0.1), std::invalid_argument);
  EXPECT_THROW(step_base(s, cmd, 0.1, 0.0, 0.5), std::invalid_argument);
  EXPECT_THROW(step_base(s, cmd, 0.1, 0.2, -1.0), std::invalid_argument);
}

struct SimFixture : ::testing::Test {
  ArmModel arm = default_arm();
  LocomotionLimits limits;
  Environment env;
  PlannerParams params;
  gorm::ReachabilityMap hot = ball_map(0.5);
  gorm::ReachabilityMap cold = ball_map(-1.0);

  // Candidates on a ring around the target, facing it, at nominal height.
  std::vector<OrmEntry> ring_orm(const Pose& target, double radius, int count) {
    std::vector<OrmEntry> orm;
    const double h = 0.5 * (limits.height_min + limits.height_max);
    for (int k = 0; k < count; ++k) {
      const double a = 2.0 * M_PI * k / count;
      Eigen::Vector2d xy = target.translation.head<2>() +
                           radius * Eigen::Vector2d(std::cos(a), std::sin(a));
      const double yaw = std::atan2(target.translation.y() - xy.y(),
                                    target.translation.x() - xy.x());
      Pose world(Eigen::Vector3d(xy.x(), xy.y(), h),
                 Eigen::Quaterniond(Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ())));
      orm.push_back(OrmEntry{target.inverse() * world, 1.0});
    }
    return orm;
  }
};

TEST_F(SimFixture, EpisodesAreDeterministicForAFixedSeed) {
  Scenario sc;
  sc.seed = 42;
  sc.max_steps = 5;
  EpisodeResult a = run_episode(arm, cold, {}, limits, env, params, sc);
  EpisodeResult b = run_episode(arm, cold, {}, limits, env, params, sc);
  EXPECT_EQ(a.outcome, b.outcome);
  EXPECT_EQ(a.steps, b.steps);
  EXPECT_EQ(a.final_state.x, b.final_state.x);
  EXPECT_EQ(a.final_state.yaw, b.final_state.yaw);
  EXPECT_EQ(a.target.translation, b.target.translation);
  EXPECT_EQ(a.target.rotation.coeffs(), b.target.rotation.coeffs());
}

TEST_F(SimFixture, SampledScenesRespectTheScenarioRanges) {
  Scenario sc;
  sc.max_steps = 1;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    sc.seed = seed;
    // Empty candidate set: the episode ends before any motion, exposing the
    // sampled spawn as the final state.
    EpisodeResult ep = run_episode(arm, cold, {}, limits, env, params, sc);
    ASSERT_EQ(ep.outcome, EpisodeOutcome::Empty);
    ASSERT_EQ(ep.steps, 0);

    EXPECT_LE(std::abs(ep.target.translation.x()), sc.target_xy_range);
    EXPECT_LE(std::abs(ep.target.translation.y()), sc.target_xy_range);
    EXPECT_DOUBLE_EQ(ep.target.translation.z(), sc.target_height);

    // Approach axis within the cone around straight down.
    Eigen::Vector3d approach = ep.target.rotation * Eigen::Vector3d::UnitZ();
    EXPECT_GE(approach.dot(Eigen::Vector3d(0, 0, -1)), std::cos(sc.approach_cone) - 1e-12);

    const double radius =
        (Eigen::Vector2d(ep.final_state.x, ep.final_state.y) -
         ep.target.translation.head<2>())
            .norm();
    EXPECT_GE(radius, sc.spawn_radius_min - 1e-12);
    EXPECT_LE(radius, sc.spawn_radius_max + 1e-12);
    EXPECT_DOUBLE_EQ(ep.final_state.height,
                     0.5 * (limits.height_min + limits.height_max));
    EXPECT_EQ(ep.final_state.pitch, 0.0);
    EXPECT_LE(std::abs(ep.final_state.yaw), M_PI);
  }
}

TEST_F(SimFixture, BothModesSeeTheSameSceneForTheSameSeed) {
  Scenario sc;
  sc.seed = 99;
  sc.max_steps = 2;
  EpisodeResult g = run_episode(arm, cold, {}, limits, env, params, sc);
  EpisodeResult n = run_naive_episode(arm, cold, limits, params, sc, 0.5);
  EXPECT_EQ(g.target.translation, n.target.translation);
  EXPECT_EQ(g.target.rotation.coeffs(), n.target.rotation.coeffs());
}

TEST_F(SimFixture, ForcedSceneBypassesSampling) {
  Scenario sc;
  sc.max_steps = 1;
  const Pose target = Pose::from_translation(0.2, 0.1, 0.8);
  const BaseState spawn{1.4, -0.3, 0.4, 0.475, 0.0};
  sc.seed = 5;
  EpisodeResult a = run_episode(arm, cold, {}, limits, env, params, sc, target, spawn);
  sc.seed = 123456;
  EpisodeResult b = run_episode(arm, cold, {}, limits, env, params, sc, target, spawn);
  EXPECT_EQ(a.target.translation, target.translation);
  EXPECT_EQ(a.final_state.x, spawn.x);
  EXPECT_EQ(a.final_state.y, spawn.y);
  EXPECT_EQ(b.final_state.x, spawn.x);
  EXPECT_EQ(a.final_state.yaw, b.final_state.yaw);
}

TEST_F(SimFixture, PlannerConvergesSwitchesAndShrinksItsDistance) {
  const Pose target = Pose::from_translation(0.1, -0.2, 0.75);
  const BaseState spawn{1.6, 0.3, 2.5, 0.475, 0.0};
  Scenario sc;
  sc.max_steps = 150;
  auto orm = ring_orm(target, 0.3, 8);

  EpisodeResult ep =
      run_episode(arm, hot, orm, limits, env, params, sc, target, spawn);
  EXPECT_EQ(ep.outcome, EpisodeOutcome::Switched);
  EXPECT_LT(ep.steps, sc.max_steps);
  EXPECT_GE(ep.final_reachability, params.switch_threshold + params.switch_hysteresis);
  ASSERT_GE(ep.dmin_trace.size(), 2u);
  EXPECT_LT(ep.dmin_trace.back(), ep.dmin_trace.front());
}

TEST_F(SimFixture, NaiveBaselineDrivesToStandoffAndSwitchesOnTheHotMap) {
  const Pose target = Pose::from_translation(0.0, 0.0, 0.75);
  const BaseState spawn{1.5, 0.0, -1.0, 0.475, 0.0};
  Scenario sc;
  sc.max_steps = 150;

  EpisodeResult ep =
      run_naive_episode(arm, hot, limits, params, sc, 0.5, target, spawn);
  EXPECT_EQ(ep.outcome, EpisodeOutcome::Switched);
  EXPECT_LT(ep.steps, sc.max_steps);
  EXPECT_GE(ep.final_reachability, params.switch_threshold + params.switch_hysteresis);

  EpisodeResult frozen =
      run_naive_episode(arm, cold, limits, params, sc, 0.5, target, spawn);
  EXPECT_EQ(frozen.outcome, EpisodeOutcome::TimedOut);
  EXPECT_EQ(frozen.steps, sc.max_steps);
}

TEST_F(SimFixture, BenchmarkRowsHaveTheDeclaredShape) {
  Scenario sc;
  sc.seed = 7;
  sc.max_steps = 40;
  const std::vector<double> heights{0.75, 0.5};

  std::vector<BenchRow> rows = run_benchmark(arm, hot, {}, limits, env, params, sc,
                                             heights, 3, BenchMode::Naive);
  ASSERT_EQ(rows.size(), heights.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].height, heights[i]);
    EXPECT_EQ(rows[i].mode, "naive");
    EXPECT_EQ(rows[i].trials, 3);
    EXPECT_GE(rows[i].switch_rate, 0.0);
    EXPECT_LE(rows[i].switch_rate, 1.0);
    EXPECT_LE(rows[i].mean_steps, sc.max_steps);
    EXPECT_GE(rows[i].mean_reachability, 0.0);
    EXPECT_LE(rows[i].mean_reachability, 1.0);
  }
  // Height 0.75 keeps the standoff pose inside the hot ball: every trial
  // switches well before the budget.
  EXPECT_EQ(rows[0].switch_rate, 1.0);
  EXPECT_LT(rows[0].mean_steps, sc.max_steps);
}

TEST_F(SimFixture, TimedOutEpisodesCountTheFullBudget) {
  Scenario sc;
  sc.seed = 11;
  sc.max_steps = 25;
  std::vector<BenchRow> rows = run_benchmark(arm, cold, {}, limits, env, params, sc,
                                             {0.75}, 4, BenchMode::Naive);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].switch_rate, 0.0);
  EXPECT_DOUBLE_EQ(rows[0].mean_steps, 25.0);

  // The empty candidate set ends planned episodes immediately, but the step
  // budget is still what the row reports.
  std::vector<BenchRow> empty_rows = run_benchmark(arm, cold, {}, limits, env, params,
                                                   sc, {0.75}, 4, BenchMode::Gorm);
  EXPECT_DOUBLE_EQ(empty_rows[0].mean_steps, 25.0);
  EXPECT_EQ(empty_rows[0].switch_rate, 0.0);
}

TEST_F(SimFixture, BenchmarkIsDeterministicAndValidatesTrials) {
  Scenario sc;
  sc.max_steps = 20;
  auto a = run_benchmark(arm, hot, {}, limits, env, params, sc, {0.75}, 2,
                         BenchMode::Naive);
  auto b = run_benchmark(arm, hot, {}, limits, env, params, sc, {0.75}, 2,
                         BenchMode::Naive);
  EXPECT_EQ(a[0].mean_reachability, b[0].mean_reachability);
  EXPECT_EQ(a[0].mean_steps, b[0].mean_steps);

  EXPECT_THROW(run_benchmark(arm, hot, {}, limits, env, params, sc, {0.75}, 0,
                             BenchMode::Naive),
               std::invalid_argument);
}

TEST(ScenarioTest, ValidateRejectsBadFields) {
  Scenario sc;
  sc.approach_cone = -0.1;
  EXPECT_THROW(sc.validate(), std::invalid_argument);
  sc = Scenario{};
  sc.spawn_radius_min = 2.0;
  sc.spawn_radius_max = 1.0;
  EXPECT_THROW(sc.validate(), std::invalid_argument);
  sc = Scenario{};
  sc.max_steps = 0;
  EXPECT_THROW(sc.validate(), std::invalid_argument);
  sc = Scenario{};
  sc.dt = 0.0;
  EXPECT_THROW(sc.validate(), std::invalid_argument);
  EXPECT_NO_THROW(Scenario{}.validate());
}

}  // namespace
