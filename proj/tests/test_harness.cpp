#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "lwq/csv.hpp"
#include "lwq/harness.hpp"

namespace lwq {
namespace {

ExperimentConfig short_circle(double duration = 10.0) {
  ExperimentConfig cfg;
  cfg.trajectory = TrajectoryDef::circle();
  cfg.duration = duration;
  return cfg;
}

TEST(Rmse, Examples) {
  const std::vector<Vec3> a{Vec3(1, 2, 3), Vec3(-1, 0, 4)};
  EXPECT_EQ(rmse(a, a), 0.0);

  std::vector<Vec3> ref(7, Vec3::Zero()), act(7, Vec3(3, 4, 0));
  EXPECT_NEAR(rmse(ref, act), 5.0, 1e-15);

  const std::vector<Vec3> r2{Vec3::Zero(), Vec3::Zero()};
  const std::vector<Vec3> p2{Vec3(1, 0, 0), Vec3(0, 2, 0)};
  EXPECT_NEAR(rmse(r2, p2), std::sqrt(2.5), 1e-15);
}

TEST(Rmse, Errors) {
  const std::vector<Vec3> empty;
  EXPECT_THROW(rmse(empty, empty), EmptySeries);
  EXPECT_THROW(rmse(std::vector<LogRow>{}), EmptySeries);
  const std::vector<Vec3> one{Vec3::Zero()};
  EXPECT_THROW(rmse(one, empty), std::invalid_argument);
}

TEST(ExperimentConfig, Validation) {
  ExperimentConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.substeps(), 4);
  cfg.duration = 0.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = ExperimentConfig{};
  cfg.plant.step = 3e-3;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = ExperimentConfig{};
  cfg.model.kappa = deg_to_rad(10.0);
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = ExperimentConfig{};
  cfg.flatness.zero_velocity_exit = 0.1;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Simulate, HoverWithPerfectModelStaysPut) {
  ExperimentConfig cfg;
  cfg.trajectory = TrajectoryDef::hover();
  cfg.duration = 5.0;
  const RunResult r = run_experiment(cfg);
  EXPECT_LT(r.rmse, 1e-6);
  EXPECT_FALSE(r.diverged);
}

TEST(Simulate, SeriesLengthIsTicksPlusOne) {
  ExperimentConfig cfg = short_circle(2.0);
  const RunResult r = simulate(cfg);
  ASSERT_EQ(r.rows.size(), 501u);
  EXPECT_DOUBLE_EQ(r.rows.front().t, 0.0);
  EXPECT_NEAR(r.rows.back().t, 2.0, 1e-12);
  EXPECT_EQ(r.rows.front().singular, SingularCase::ZeroVelocity);
}

TEST(Simulate, PdDfafCircleStaysBounded) {
  ExperimentConfig cfg = short_circle(30.0);
  cfg.mode = mode_for(Condition::PdDfaf);
  const RunResult r = run_experiment(cfg);
  EXPECT_FALSE(r.diverged);
  EXPECT_LT(r.rmse, 0.5);
  EXPECT_LT(r.peak_error, 2.0);
}

TEST(Simulate, ZeroGainsDiverge) {
  ExperimentConfig cfg = short_circle(60.0);
  cfg.gains.kpp = cfg.gains.kvp = cfg.gains.kvi = cfg.gains.katt = Vec3::Zero();
  cfg.plant.wind = Vec3(3, 0, 0);
  cfg.initial_offset = Vec3(2, 0, 0);
  cfg.abort_radius = 5.0;
  EXPECT_THROW(run_experiment(cfg), DivergenceError);
  const RunResult r = simulate(cfg);
  EXPECT_TRUE(r.diverged);
  EXPECT_GT(r.divergence_time, 0.0);
  EXPECT_LT(r.rows.size(), 60u * 250u + 1u);
}

TEST(Simulate, DeterministicWithNoiseAndDelay) {
  ExperimentConfig cfg = short_circle(3.0);
  cfg.position_noise = 0.05;
  cfg.delay_ticks = 3;
  cfg.seed = 42;
  std::ostringstream a, b;
  write_trace_csv(a, simulate(cfg).rows);
  write_trace_csv(b, simulate(cfg).rows);
  EXPECT_EQ(a.str(), b.str());

  cfg.seed = 43;
  std::ostringstream c;
  write_trace_csv(c, simulate(cfg).rows);
  EXPECT_NE(a.str(), c.str());
}

TEST(ConditionMatrix, FixedOrderAndParallelMatchesSerial) {
  ExperimentConfig cfg = short_circle(4.0);
  const auto par = condition_matrix(cfg, true);
  const auto ser = condition_matrix(cfg, false);
  ASSERT_EQ(par.size(), 5u);
  const char* names[] = {"pid-dfaf", "pd-dfaf", "pid-df", "pd-df", "no-rate-ff"};
  for (std::size_t i = 0; i < par.size(); ++i) {
    EXPECT_EQ(par[i].name, names[i]);
    EXPECT_TRUE(par[i].ok) << par[i].error;
    EXPECT_EQ(par[i].rmse, ser[i].rmse);
  }
  EXPECT_FALSE(par[4].mode.use_rate_feedforward);
}

TEST(ConditionMatrix, ZeroAeroPlantMakesDfafAndDfIdentical) {
  ExperimentConfig cfg = short_circle(4.0);
  cfg.plant.aero = cfg.plant.aero.without_aero();
  cfg.model = cfg.model.without_aero();
  const auto cells = condition_matrix(cfg);
  std::ostringstream a, b;
  write_trace_csv(a, cells[0].result.rows);
  write_trace_csv(b, cells[2].result.rows);
  EXPECT_EQ(a.str(), b.str());
}

TEST(ConditionMatrix, AeroFeedforwardHelpsWithMatchedModel) {
  ExperimentConfig cfg = short_circle(30.0);
  const auto cells = condition_matrix(cfg);
  EXPECT_LT(cells[0].rmse, cells[2].rmse);
  EXPECT_LT(cells[1].rmse, cells[3].rmse);
}

TEST(ConditionMatrix, ErrorsStayInTheirCell) {
  ExperimentConfig cfg = short_circle(4.0);
  cfg.duration = -1.0;
  const auto cells = condition_matrix(cfg);
  ASSERT_EQ(cells.size(), 5u);
  for (const auto& c : cells) {
    EXPECT_FALSE(c.ok);
    EXPECT_FALSE(c.error.empty());
  }
}

TEST(FlatTrace, CoversTheDuration) {
  ExperimentConfig cfg = short_circle(1.0);
  const auto rows = flat_trace(cfg);
  ASSERT_EQ(rows.size(), 251u);
  EXPECT_EQ(rows[0].output.singular_case, SingularCase::ZeroVelocity);
  EXPECT_EQ(rows[250].output.singular_case, SingularCase::None);
}

TEST(CheckFeasibility, DefaultCircleIsFeasible) {
  const FeasibilityReport rep = check_feasibility(short_circle(30.0));
  EXPECT_TRUE(rep.feasible());
  EXPECT_GT(rep.max_thrust, 0.0);
  EXPECT_EQ(rep.samples, 7501);
}

TEST(CheckFeasibility, TightLimitsAreReported) {
  ExperimentConfig cfg = short_circle(30.0);
  cfg.limits.thrust_to_weight = 0.5;
  const FeasibilityReport rep = check_feasibility(cfg);
  EXPECT_FALSE(rep.feasible());
  EXPECT_GT(rep.thrust_violations, 0);
}

}  // namespace
}  // namespace lwq
