#include "lwq/control.hpp"

#include <algorithm>
#include <stdexcept>

namespace lwq {
namespace {

constexpr double kFreeFallEps = 1e-6;

bool all_nonnegative(const Vec3& v) { return v.allFinite() && (v.array() >= 0.0).all(); }

}  // namespace

void Gains::validate() const {
  if (!all_nonnegative(kpp) || !all_nonnegative(kvp) || !all_nonnegative(kvi) ||
      !all_nonnegative(katt) || !all_nonnegative(integrator_limit)) {
    throw std::invalid_argument("gains: entries must be finite and >= 0");
  }
  if (!all_nonnegative(kff) || (kff.array() > 1.0).any()) {
    throw std::invalid_argument("gains: kff entries must lie in [0, 1]");
  }
}

void ActuatorLimits::validate() const {
  if (!(thrust_to_weight > 0.0) || !(max_rate > 0.0)) {
    throw std::invalid_argument("limits: thrust_to_weight and max_rate must be positive");
  }
}

ControllerMode mode_for(Condition c) {
  ControllerMode mode;
  mode.use_integrator = c == Condition::PidDfaf || c == Condition::PidDf;
  mode.use_aero_feedforward = c == Condition::PidDfaf || c == Condition::PdDfaf;
  return mode;
}

const char* to_string(Condition c) {
  switch (c) {
    case Condition::PidDfaf: return "pid-dfaf";
    case Condition::PdDfaf: return "pd-dfaf";
    case Condition::PidDf: return "pid-df";
    case Condition::PdDf: return "pd-df";
  }
  return "unknown";
}

std::optional<Condition> parse_condition(std::string_view name) {
  for (Condition c : {Condition::PidDfaf, Condition::PdDfaf, Condition::PidDf, Condition::PdDf}) {
    if (name == to_string(c)) {
      return c;
    }
  }
  return std::nullopt;
}

AeroParams feedforward_model(const AeroParams& params, const ControllerMode& mode) {
  return mode.use_aero_feedforward ? params : params.without_aero();
}

Vec3 position_loop(const Gains& gains, const Vec3& p_ref, const Vec3& p, const Vec3& v_ref) {
  return gains.kpp.cwiseProduct(p_ref - p) + v_ref;
}

VelocityLoopResult velocity_loop(const Gains& gains, const ControllerMode& mode, const Vec3& v_d,
                                 const Vec3& v, const Vec3& a_ref, const Vec3& integrator, double dt,
                                 bool freeze) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("velocity_loop: dt must be positive");
  }
  const Vec3 error = v_d - v;
  VelocityLoopResult out;
  out.integrator = integrator;
  if (mode.use_integrator && !freeze) {
    out.integrator += gains.kvi.cwiseProduct(error) * dt;
    out.integrator = out.integrator.cwiseMax(-gains.integrator_limit).cwiseMin(gains.integrator_limit);
  }
  out.accel = gains.kvp.cwiseProduct(error) + a_ref;
  if (mode.use_integrator) {
    out.accel += out.integrator;
  }
  return out;
}

AttitudeThrust accel_to_attitude_thrust(const AeroParams& params, const Gains& gains,
                                        const ControllerMode& mode, const Vec3& a_d,
                                        const FlatnessOutput& ff, const Vec3& v_ref,
                                        const Vec3& v_wind, const std::optional<Mat3>& hold) {
  Vec3 wing = Vec3::Zero();
  if (mode.use_aero_feedforward) {
    wing = aero_accel_earth(params, ff.attitude, v_ref - v_wind);
  }
  const Vec3 rotor = a_d - gravity_vector() - gains.kff.cwiseProduct(wing);

  AttitudeThrust out;
  const double rotor_norm = rotor.norm();
  if (rotor_norm < kFreeFallEps) {
    out.attitude = hold.value_or(ff.attitude);
    out.thrust = 0.0;
    out.free_fall = true;
    return out;
  }

  const Vec3 z_b = -rotor / rotor_norm;
  Vec3 y_b = z_b.cross(ff.wind_axis);
  if (y_b.norm() < 1e-6) {
    y_b = z_b.cross(ff.attitude.col(0));
  }
  if (y_b.norm() < 1e-6) {
    const Vec3 y_ref = ff.attitude.col(1);
    y_b = y_ref - y_ref.dot(z_b) * z_b;
  }
  y_b.normalize();
  const Vec3 x_b = y_b.cross(z_b);

  out.attitude.col(0) = x_b;
  out.attitude.col(1) = y_b;
  out.attitude.col(2) = z_b;

  if (mode.legacy_thrust_normalization) {
    // Normalized by the specific force a_d - g and projected onto it.
    const Vec3 specific = a_d - gravity_vector();
    const double s_norm = specific.norm();
    const Vec3 z_legacy = s_norm > 0.0 ? Vec3(-rotor / s_norm) : z_b;
    out.thrust = params.mass * z_legacy.dot(specific);
  } else {
    out.thrust = params.mass * z_b.dot(rotor);
  }
  return out;
}

Vec3 attitude_loop(const Gains& gains, const Mat3& desired, const UnitQuaternion& current,
                   const Vec3& rate_ref, const ControllerMode& mode) {
  const UnitQuaternion q_d = mat_to_quat(desired);
  const UnitQuaternion q_err = quat_mul(quat_conj(q_d), current.normalized());
  const AxisAngleError err = quat_to_axis_angle(q_err);
  Vec3 cmd = -gains.katt.cwiseProduct(err.vector);
  if (mode.use_rate_feedforward) {
    cmd += rate_ref;
  }
  return cmd;
}

ControlInput saturate(const ControlInput& input, const ActuatorLimits& limits, double mass) {
  ControlInput out;
  const double thrust_min = -limits.thrust_to_weight * mass * kGravity;
  out.thrust = std::clamp(input.thrust, thrust_min, 0.0);
  out.body_rate = input.body_rate.cwiseMax(-limits.max_rate).cwiseMin(limits.max_rate);
  return out;
}

ControllerOutput controller_step(const AeroParams& params, const Gains& gains,
                                 const ControllerMode& mode, const ActuatorLimits& limits,
                                 const FlatSample& ref, const FlatnessOutput& ff,
                                 const VehicleState& state, ControllerContext& ctx, double dt,
                                 const Vec3& v_wind) {
  const Vec3 v_d = position_loop(gains, ref.p, state.p, ref.v);
  const VelocityLoopResult vel =
      velocity_loop(gains, mode, v_d, state.v, ref.a, ctx.integrator, dt, ctx.thrust_saturated);

  const AttitudeThrust at =
      accel_to_attitude_thrust(params, gains, mode, vel.accel, ff, ref.v, v_wind, ctx.last_attitude);

  const Vec3 rate = attitude_loop(gains, at.attitude, UnitQuaternion(orthonormalize(state.attitude)),
                                  ff.body_rate, mode);

  ControllerOutput out;
  out.input = saturate(ControlInput{at.thrust, rate}, limits, params.mass);
  out.desired_attitude = at.attitude;
  out.accel_cmd = vel.accel;
  out.free_fall = at.free_fall;

  ctx.integrator = vel.integrator;
  ctx.thrust_saturated = out.input.thrust != at.thrust;
  ctx.last_attitude = at.attitude;
  return out;
}

}  // namespace lwq
