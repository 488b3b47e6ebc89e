#pragma once

#include <optional>
#include <string_view>

#include "lwq/dynamics.hpp"
#include "lwq/flatness.hpp"

namespace lwq {

// Diagonal gains are stored as their diagonals.
struct Gains {
  Vec3 kpp = Vec3::Constant(1.0);
  Vec3 kvp = Vec3::Constant(3.0);
  Vec3 kvi = Vec3::Constant(0.6);
  Vec3 kff = Vec3::Constant(0.8);
  Vec3 katt = Vec3::Constant(8.0);
  Vec3 integrator_limit = Vec3::Constant(3.0);  // m/s^2 per axis

  void validate() const;
};

struct ControllerMode {
  bool use_integrator = true;        // PID (true) or PD (false) velocity loop
  bool use_aero_feedforward = true;  // DFAF (true) or DF (false)
  bool use_rate_feedforward = true;
  // Thrust from the specific force a_d - g, normalized by its own length,
  // instead of the rotor-borne acceleration a_r,d. Kept for comparison only.
  bool legacy_thrust_normalization = false;
};

/// Named conditions of the comparison matrix.
enum class Condition { PidDfaf, PdDfaf, PidDf, PdDf };
ControllerMode mode_for(Condition c);
const char* to_string(Condition c);
std::optional<Condition> parse_condition(std::string_view name);

struct ActuatorLimits {
  double thrust_to_weight = 4.0;  // |f_z| <= thrust_to_weight * m g
  double max_rate = 6.0;          // rad/s, infinity norm

  void validate() const;
};

struct ControllerContext {
  Vec3 integrator = Vec3::Zero();  // K_vi * integral of the velocity error, m/s^2
  std::optional<Mat3> last_attitude;
  bool thrust_saturated = false;
};

/// Model the flatness feedforward should use for this mode (aero-free for DF).
AeroParams feedforward_model(const AeroParams& params, const ControllerMode& mode);

/// v_d = K_pp (p_ref - p) + v_ref
Vec3 position_loop(const Gains& gains, const Vec3& p_ref, const Vec3& p, const Vec3& v_ref);

struct VelocityLoopResult {
  Vec3 accel = Vec3::Zero();
  Vec3 integrator = Vec3::Zero();
};

/// a_d = K_vp (v_d - v) + I + a_ref with I <- clamp(I + K_vi (v_d - v) dt).
/// The integrator does not move in PD mode or while `freeze` is set.
VelocityLoopResult velocity_loop(const Gains& gains, const ControllerMode& mode, const Vec3& v_d,
                                 const Vec3& v, const Vec3& a_ref, const Vec3& integrator, double dt,
                                 bool freeze = false);

struct AttitudeThrust {
  Mat3 attitude = Mat3::Identity();
  double thrust = 0.0;
  bool free_fall = false;
};

/// Maps the commanded acceleration to a desired attitude and thrust. The wing
/// acceleration is evaluated at the reference attitude and reference airspeed.
/// When the rotor-borne acceleration vanishes, `hold` (or the reference
/// attitude) is returned with zero thrust.
AttitudeThrust accel_to_attitude_thrust(const AeroParams& params, const Gains& gains,
                                        const ControllerMode& mode, const Vec3& a_d,
                                        const FlatnessOutput& ff, const Vec3& v_ref,
                                        const Vec3& v_wind = Vec3::Zero(),
                                        const std::optional<Mat3>& hold = std::nullopt);

/// w_cmd = -K_att xi_e + w_ref, where xi_e is the shortest-path axis-angle of
/// q_d^* (x) q (the rotation from the desired to the current body frame).
Vec3 attitude_loop(const Gains& gains, const Mat3& desired, const UnitQuaternion& current,
                   const Vec3& rate_ref, const ControllerMode& mode);

ControlInput saturate(const ControlInput& input, const ActuatorLimits& limits, double mass);

struct ControllerOutput {
  ControlInput input;
  Mat3 desired_attitude = Mat3::Identity();
  Vec3 accel_cmd = Vec3::Zero();
  bool free_fall = false;
};

/// Position -> velocity -> attitude/thrust -> body rate, then saturation.
/// `ff` must be the flatness output for `ref` under feedforward_model().
ControllerOutput controller_step(const AeroParams& params, const Gains& gains,
                                 const ControllerMode& mode, const ActuatorLimits& limits,
                                 const FlatSample& ref, const FlatnessOutput& ff,
                                 const VehicleState& state, ControllerContext& ctx, double dt,
                                 const Vec3& v_wind = Vec3::Zero());

}  // namespace lwq
