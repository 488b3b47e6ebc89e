#pragma once

#include <functional>

#include "lwq/aero.hpp"

namespace lwq {

/// Collective thrust (N, <= 0 along body z) and commanded body rate (rad/s).
struct ControlInput {
  double thrust = 0.0;
  Vec3 body_rate = Vec3::Zero();
};

struct VehicleState {
  Vec3 p = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  Mat3 attitude = Mat3::Identity();  // R_b^e
  double t = 0.0;
};

struct PlantConfig {
  AeroParams aero;
  Vec3 wind = Vec3::Zero();
  double tau_rate = 0.0;    // s, first-order lag of the body-rate loop (0 = ideal)
  double tau_thrust = 0.0;  // s, first-order lag of the thrust (0 = ideal)
  double step = 1e-3;       // s, integration step

  void validate() const;
};

struct StateDerivative {
  Vec3 p_dot = Vec3::Zero();
  Vec3 v_dot = Vec3::Zero();
  Mat3 attitude_dot = Mat3::Zero();
};

/// p' = v, v' = (R [0 0 f]^T + R_l^e f_a + m g) / m, R' = R [w]x.
StateDerivative state_derivative(const PlantConfig& cfg, const VehicleState& state,
                                 const ControlInput& input);

/// One classical RK4 step of length cfg.step with the input held constant.
/// The attitude is re-orthonormalized after the step.
VehicleState rk4_step(const PlantConfig& cfg, const VehicleState& state, const ControlInput& input);

/// RK4 step with a time-varying input evaluated at each stage time.
VehicleState rk4_step(const PlantConfig& cfg, const VehicleState& state,
                      const std::function<ControlInput(double)>& input);

/// applied + min(1, dt / tau) (commanded - applied) per channel; pass-through
/// for tau == 0.
ControlInput actuator_lag(const PlantConfig& cfg, const ControlInput& commanded,
                          const ControlInput& applied_prev, double dt);

}  // namespace lwq
