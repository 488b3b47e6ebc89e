#include "lwq/dynamics.hpp"

#include <algorithm>
#include <stdexcept>

namespace lwq {
namespace {

VehicleState advance(const VehicleState& s, const StateDerivative& d, double h) {
  VehicleState out;
  out.p = s.p + h * d.p_dot;
  out.v = s.v + h * d.v_dot;
  out.attitude = s.attitude + h * d.attitude_dot;
  out.t = s.t + h;
  return out;
}

double lag_gain(double tau, double dt) {
  if (tau <= 0.0) {
    return 1.0;
  }
  return std::min(1.0, dt / tau);
}

}  // namespace

void PlantConfig::validate() const {
  aero.validate();
  if (!(step > 0.0)) throw std::invalid_argument("plant: step must be positive");
  if (!(tau_rate >= 0.0) || !(tau_thrust >= 0.0)) {
    throw std::invalid_argument("plant: actuator time constants must be >= 0");
  }
  if (!wind.allFinite()) throw std::invalid_argument("plant: wind must be finite");
}

StateDerivative state_derivative(const PlantConfig& cfg, const VehicleState& state,
                                 const ControlInput& input) {
  const AeroParams& aero = cfg.aero;
  const Mat3& r = state.attitude;
  const Vec3 v_air = state.v - cfg.wind;

  const Vec3 rotor = r * Vec3(0.0, 0.0, input.thrust);
  const Mat3 r_l_e = r * r_b_l(aero.kappa).transpose();
  const Vec3 wing = r_l_e * aero_force_l_frame(aero, r, v_air);

  StateDerivative d;
  d.p_dot = state.v;
  d.v_dot = (rotor + wing) / aero.mass + gravity_vector();
  d.attitude_dot = r * skew(input.body_rate);
  return d;
}

VehicleState rk4_step(const PlantConfig& cfg, const VehicleState& state, const ControlInput& input) {
  return rk4_step(cfg, state, [&input](double) { return input; });
}

VehicleState rk4_step(const PlantConfig& cfg, const VehicleState& state,
                      const std::function<ControlInput(double)>& input) {
  const double h = cfg.step;
  const double t = state.t;

  const StateDerivative k1 = state_derivative(cfg, state, input(t));
  const StateDerivative k2 = state_derivative(cfg, advance(state, k1, 0.5 * h), input(t + 0.5 * h));
  const StateDerivative k3 = state_derivative(cfg, advance(state, k2, 0.5 * h), input(t + 0.5 * h));
  const StateDerivative k4 = state_derivative(cfg, advance(state, k3, h), input(t + h));

  VehicleState out;
  out.p = state.p + h / 6.0 * (k1.p_dot + 2.0 * k2.p_dot + 2.0 * k3.p_dot + k4.p_dot);
  out.v = state.v + h / 6.0 * (k1.v_dot + 2.0 * k2.v_dot + 2.0 * k3.v_dot + k4.v_dot);
  out.attitude = orthonormalize(state.attitude + h / 6.0 * (k1.attitude_dot + 2.0 * k2.attitude_dot +
                                                             2.0 * k3.attitude_dot + k4.attitude_dot));
  out.t = t + h;
  return out;
}

ControlInput actuator_lag(const PlantConfig& cfg, const ControlInput& commanded,
                          const ControlInput& applied_prev, double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("actuator_lag: dt must be positive");
  }
  const double gf = lag_gain(cfg.tau_thrust, dt);
  const double gw = lag_gain(cfg.tau_rate, dt);
  ControlInput out;
  out.thrust = applied_prev.thrust + gf * (commanded.thrust - applied_prev.thrust);
  out.body_rate = applied_prev.body_rate + gw * (commanded.body_rate - applied_prev.body_rate);
  return out;
}

}  // namespace lwq
