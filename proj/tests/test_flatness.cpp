#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "lwq/dynamics.hpp"
#include "lwq/flatness.hpp"
#include "oracles.hpp"

namespace lwq {
namespace {

constexpr double kPi = std::numbers::pi;

AeroParams reference_airframe() {
  AeroParams p;
  p.mass = 1.5;
  p.kappa = deg_to_rad(34.0);
  p.rho = 1.225;
  p.wing_area = 0.2;
  p.cd0 = 0.05;
  p.cl_alpha = 2.0;
  return p;
}

FlatSample level_flight(double speed) {
  FlatSample s;
  s.v = Vec3(speed, 0.0, 0.0);
  return s;
}

TEST(WindAxis, Examples) {
  EXPECT_TRUE(wind_axis(Vec3(10, 0, 0), Vec3::Zero())->isApprox(Vec3::UnitX()));
  EXPECT_FALSE(wind_axis(Vec3::Zero(), Vec3::Zero()).has_value());
  EXPECT_LT((*wind_axis(Vec3(3, 4, 0), Vec3::Zero()) - Vec3(0.6, 0.8, 0.0)).norm(), 1e-15);
  // Airspeed, not ground speed.
  EXPECT_FALSE(wind_axis(Vec3(2, 0, 0), Vec3(2, 0, 0)).has_value());
  EXPECT_TRUE(wind_axis(Vec3::Zero(), Vec3(-5, 0, 0))->isApprox(Vec3::UnitX()));
}

TEST(WindFrameAccels, Examples) {
  WindFrameAccel w = wind_frame_accels(Vec3::UnitX(), Vec3::Zero());
  EXPECT_EQ(w.xw, 0.0);
  EXPECT_NEAR(w.zw, -9.81, 1e-15);

  w = wind_frame_accels(Vec3::UnitX(), Vec3(0, 0, 9.81));
  EXPECT_EQ(w.xw, 0.0);
  EXPECT_EQ(w.zw, 0.0);

  w = wind_frame_accels(Vec3::UnitX(), Vec3(2, 0, -3));
  EXPECT_NEAR(w.xw, 2.0, 1e-15);
  EXPECT_NEAR(w.zw, -12.81, 1e-14);
}

TEST(WindFrameAccels, AlwaysNonPositiveNormalComponent) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-30, 30);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_LE(wind_frame_accels(oracle::random_unit(rng), Vec3(u(rng), u(rng), u(rng))).zw, 0.0);
  }
}

TEST(ThrustAlpha, HoverLimit) {
  const AeroParams p = reference_airframe();
  const auto ta = thrust_alpha(p, 0.0, 0.0, -kGravity);
  ASSERT_TRUE(ta);
  EXPECT_NEAR(ta->thrust, -p.mass * kGravity, 1e-12);
  EXPECT_NEAR(ta->alpha, p.kappa, 1e-12);
}

TEST(ThrustAlpha, QuadcopterLimit) {
  const AeroParams p = reference_airframe().without_aero();
  for (double axw : {-3.0, 0.0, 2.5}) {
    for (double azw : {-1.0, -9.81, -15.0}) {
      const auto ta = thrust_alpha(p, 12.0, axw, azw);
      ASSERT_TRUE(ta);
      EXPECT_NEAR(ta->thrust, -p.mass * std::hypot(axw, azw), 1e-12);
    }
  }
}

TEST(ThrustAlpha, ReferenceCaseAgreesWithNewtonSolver) {
  const AeroParams p = reference_airframe();
  const auto ta = thrust_alpha(p, 10.0, 0.0, -9.81);
  ASSERT_TRUE(ta);
  double f = 0, a = 0;
  ASSERT_TRUE(oracle::newton_thrust_alpha(p, 10.0, 0.0, -9.81, f, a));
  EXPECT_NEAR(ta->thrust, f, 1e-9);
  EXPECT_NEAR(wrap_pi(ta->alpha - a), 0.0, 1e-9);
  // Wing carries part of the weight in level flight.
  EXPECT_GT(ta->thrust, -p.mass * kGravity);
  EXPECT_LT(ta->thrust, 0.0);
}

TEST(ThrustAlpha, RandomBalanceResidual) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> speed(0.0, 15.0), ax(-10.0, 10.0), az(0.0, 25.0),
      kappa(deg_to_rad(16.0), deg_to_rad(90.0));
  for (int i = 0; i < 20000; ++i) {
    AeroParams p = reference_airframe();
    p.kappa = kappa(rng);
    const double va = speed(rng), axw = ax(rng), azw = -az(rng);
    const auto ta = thrust_alpha(p, va, axw, azw);
    ASSERT_TRUE(ta);
    ASSERT_LE(ta->thrust, 0.0);
    const Vec3 thrust_w = ta->thrust * (r_l_w(ta->alpha) * r_b_l(p.kappa)).col(2);
    const Vec3 wing_w = -aero_force_wind_frame(p, va, ta->alpha);
    const Vec3 residual = thrust_w + wing_w - p.mass * Vec3(axw, 0.0, azw);
    ASSERT_LT(residual.norm(), 1e-8 * p.mass * kGravity) << "case " << i;
  }
}

TEST(ThrustAlpha, DegenerateBalance) {
  EXPECT_FALSE(thrust_alpha(reference_airframe(), 0.0, 0.0, 0.0).has_value());
}

TEST(AttitudeFromFlat, HoverFallsThroughToSingularPath) {
  const AeroParams p = reference_airframe();
  FlatSample s;
  EXPECT_FALSE(attitude_from_flat(p, s).has_value());
  const FlatnessOutput out = flatness_transform(p, s);
  EXPECT_EQ(out.singular_case, SingularCase::ZeroVelocity);
  EXPECT_LT((out.attitude - Mat3::Identity()).norm(), 1e-15);
  EXPECT_NEAR(out.thrust, -p.mass * kGravity, 1e-12);
  EXPECT_EQ(out.body_rate, Vec3::Zero());
}

TEST(AttitudeFromFlat, ZeroAeroLevelFlightIsLevel) {
  const AeroParams p = reference_airframe().without_aero();
  const auto sol = attitude_from_flat(p, level_flight(10.0));
  ASSERT_TRUE(sol);
  EXPECT_LT((sol->attitude.col(2) - Vec3::UnitZ()).norm(), 1e-12);
  EXPECT_NEAR(sol->thrust, -p.mass * kGravity, 1e-12);
}

TEST(AttitudeFromFlat, CircleSampleSatisfiesForceBalance) {
  const AeroParams p = reference_airframe();
  const TrajectoryDef def = TrajectoryDef::circle();
  const FlatSample s = sample(def, 20.0);  // constant 10 m/s phase
  const auto sol = attitude_from_flat(p, s);
  ASSERT_TRUE(sol);
  EXPECT_LT(oracle::force_balance_residual(p, s, sol->attitude, sol->thrust).norm(), 1e-8);

  const Mat3& r = sol->attitude;
  EXPECT_LT(orthonormality_residual(r), 1e-12);
  EXPECT_NEAR(r.determinant(), 1.0, 1e-12);
  EXPECT_LT(std::abs(r.col(1).dot(sol->y_perp)), 1e-12 * sol->y_perp.norm());
  EXPECT_LT(std::abs(r.col(1).dot(sol->wind_axis)), 1e-12);
  EXPECT_NEAR(r.col(0).dot(sol->wind_axis), std::cos(sol->alpha - p.kappa), 1e-12);
  EXPECT_NEAR(angle_of_attack(p, r, s.v), sol->alpha, 1e-10);
}

TEST(AttitudeFromFlat, ZeroAeroReductionSweep) {
  const AeroParams p = reference_airframe().without_aero();
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-8.0, 8.0);
  for (int i = 0; i < 2000; ++i) {
    FlatSample s;
    s.v = Vec3(u(rng), u(rng), u(rng));
    s.a = Vec3(u(rng), u(rng), u(rng));
    if (s.v.norm() < 1.0) continue;
    const auto sol = attitude_from_flat(p, s);
    if (!sol) continue;
    const Vec3 spec = s.a - gravity_vector();
    EXPECT_NEAR(sol->thrust, -p.mass * spec.norm(), 1e-12 * p.mass * spec.norm());
    EXPECT_LT((sol->attitude.col(2) + spec / spec.norm()).norm(), 1e-12);
  }
}

TEST(AngularVelocity, StraightLevelFlightIsZero) {
  const AeroParams p = reference_airframe();
  const FlatSample s = level_flight(8.0);
  const auto sol = attitude_from_flat(p, s);
  ASSERT_TRUE(sol);
  const auto w = angular_velocity_from_flat(p, s, sol->attitude, sol->thrust);
  ASSERT_TRUE(w);
  EXPECT_LT(w->norm(), 1e-12);
}

TEST(AngularVelocity, MatchesCentralDifferenceOnCircleAndLemniscate) {
  const AeroParams p = reference_airframe();
  for (const auto& [def, t] : {std::pair{TrajectoryDef::circle(), 6.0}, std::pair{TrajectoryDef::circle(), 25.0},
                               std::pair{TrajectoryDef::lemniscate(), 7.3}}) {
    const FlatSample s = sample(def, t);
    const auto sol = attitude_from_flat(p, s);
    ASSERT_TRUE(sol);
    const auto w = angular_velocity_from_flat(p, s, sol->attitude, sol->thrust);
    ASSERT_TRUE(w);
    const Vec3 fd = oracle::central_difference_rate(
        [&](double tt) { return attitude_from_flat(p, sample(def, tt))->attitude; }, t, 1e-5);
    EXPECT_LT((*w - fd).cwiseAbs().maxCoeff(), 1e-3) << "t = " << t;
  }
}

TEST(AngularVelocity, SatisfiesCoordinatedTurnConstraint) {
  const AeroParams p = reference_airframe();
  const TrajectoryDef def = TrajectoryDef::lemniscate();
  for (double t = 0.5; t < 38.0; t += 0.5) {
    const FlatSample s = sample(def, t);
    const auto sol = attitude_from_flat(p, s);
    if (!sol) continue;
    const auto w = angular_velocity_from_flat(p, s, sol->attitude, sol->thrust);
    ASSERT_TRUE(w);
    const Vec3 bv = sol->attitude.transpose() * s.v;
    const double g_yb = kGravity * sol->attitude(2, 1);
    EXPECT_NEAR(w->x() * bv.z() - w->z() * bv.x(), -g_yb, 1e-12 * std::max(1.0, bv.norm() * w->norm()));
  }
}

TEST(FlatnessTransform, VerticalAscentUsesAlignedFallback) {
  const AeroParams p = reference_airframe();
  FlatSample s;
  s.v = Vec3(0.0, 0.0, -2.0);
  const FlatnessOutput out = flatness_transform(p, s);
  EXPECT_EQ(out.singular_case, SingularCase::AlignedYPerp);
  EXPECT_LT(orthonormality_residual(out.attitude), 1e-12);
  EXPECT_NEAR(out.attitude.determinant(), 1.0, 1e-12);
  EXPECT_LE(out.thrust, 0.0);
  // Climbing into the airflow needs more than the weight.
  EXPECT_LT(out.thrust, -p.mass * kGravity);
}

TEST(FlatnessTransform, HysteresisLimitsFlagChanges) {
  const AeroParams p = reference_airframe();
  FlatnessContext ctx;
  int transitions = 0;
  SingularCase prev = SingularCase::ZeroVelocity;
  for (int k = 0; k <= 2000; ++k) {
    const double ramp = 0.25 + 0.30 * k / 2000.0;
    const double speed = ramp + 0.04 * std::sin(0.7 * k);
    FlatSample s;
    s.v = Vec3(speed, 0.0, 0.0);
    const SingularCase now = flatness_transform(p, s, ctx).singular_case;
    if (k > 0 && now != prev) ++transitions;
    prev = now;
  }
  EXPECT_LE(transitions, 2);
}

TEST(FlatnessTransform, HoldsLastWindAxisWhenStopping) {
  const AeroParams p = reference_airframe();
  FlatnessContext ctx;
  FlatSample s;
  s.v = Vec3(0.0, 5.0, 0.0);
  s.yaw_fallback = 0.0;
  flatness_transform(p, s, ctx);
  s.v = Vec3::Zero();
  const FlatnessOutput held = flatness_transform(p, s, ctx);
  EXPECT_EQ(held.singular_case, SingularCase::ZeroVelocity);
  EXPECT_LT((held.attitude.col(0) - Vec3::UnitY()).norm(), 1e-12);

  FlatnessOptions no_hold;
  no_hold.hold_last_wind_axis = false;
  const FlatnessOutput yaw = flatness_transform(p, s, ctx, Vec3::Zero(), no_hold);
  EXPECT_LT((yaw.attitude.col(0) - Vec3::UnitX()).norm(), 1e-12);
}

TEST(FlatnessTransform, LemniscateSweepResiduals) {
  const AeroParams p = reference_airframe();
  const TrajectoryDef def = TrajectoryDef::lemniscate();
  const double period = 4 * kPi / def.omega;
  FlatnessContext ctx;
  int regular = 0;
  for (int i = 0; i < 1000; ++i) {
    const FlatSample s = sample(def, period * i / 1000.0);
    const FlatnessOutput out = flatness_transform(p, s, ctx);
    if (out.singular_case != SingularCase::None) continue;
    ++regular;
    EXPECT_LT(oracle::force_balance_residual(p, s, out.attitude, out.thrust).norm(), 1e-8);
  }
  EXPECT_GT(regular, 990);
}

TEST(FlatnessTransform, WindShiftsTheAirspeed) {
  // Flying at 8 m/s into a 2 m/s headwind looks like 10 m/s still-air flight.
  const AeroParams p = reference_airframe();
  const FlatnessOutput windy = flatness_transform(p, level_flight(8.0), Vec3(-2.0, 0.0, 0.0));
  const FlatnessOutput still = flatness_transform(p, level_flight(10.0));
  EXPECT_NEAR(windy.thrust, still.thrust, 1e-12);
  EXPECT_NEAR(windy.alpha, still.alpha, 1e-12);
}

TEST(FlatnessTransform, OpenLoopRoundTripReproducesLemniscate) {
  const AeroParams p = reference_airframe();
  const TrajectoryDef def = TrajectoryDef::lemniscate();
  const double t0 = 6.0;
  PlantConfig plant;
  plant.aero = p;
  plant.step = 1e-3;

  auto inputs = [&](double t) {
    const FlatnessOutput out = flatness_transform(p, sample(def, t));
    return ControlInput{out.thrust, out.body_rate};
  };
  const FlatSample s0 = sample(def, t0);
  VehicleState state;
  state.p = s0.p;
  state.v = s0.v;
  state.attitude = flatness_transform(p, s0).attitude;
  state.t = t0;
  double worst = 0.0;
  for (int k = 0; k < 2000; ++k) {
    state = rk4_step(plant, state, inputs);
    worst = std::max(worst, (state.p - sample(def, state.t).p).norm());
  }
  EXPECT_LT(worst, 1e-3);
}

}  // namespace
}  // namespace lwq
