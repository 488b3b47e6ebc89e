#pragma once

#include <optional>

#include "lwq/aero.hpp"
#include "lwq/trajectories.hpp"

namespace lwq {

// Flat output -> (attitude, thrust, angle of attack, body rate) for the
// lifting-wing quadcopter under the coordinated-turn assumption (no
// sideslip, y_b orthogonal to the airspeed).

enum class SingularCase { None = 0, ZeroVelocity = 1, AlignedYPerp = 2 };

const char* to_string(SingularCase c);

struct FlatnessOutput {
  Mat3 attitude = Mat3::Identity();  // R_b^e
  double thrust = 0.0;               // N, <= 0 (acts along body z)
  double alpha = 0.0;                // rad
  Vec3 body_rate = Vec3::Zero();     // rad/s, body frame
  Vec3 wind_axis = Vec3::UnitX();    // x_w; the heading used when singular
  double accel_xw = 0.0;
  double accel_zw = 0.0;
  SingularCase singular_case = SingularCase::None;
};

struct FlatnessOptions {
  double zero_velocity_enter = 0.3;  // m/s, enter the zero-velocity branch below
  double zero_velocity_exit = 0.5;   // m/s, leave it above
  double cross_eps = 1e-6;           // relative |x_w x y_perp| threshold
  double det_eps = 1e-9;             // relative determinant threshold of the rate system
  double balance_eps = 1e-9;         // N, degenerate force balance threshold
  bool hold_last_wind_axis = true;
};

/// Per-trajectory-stream memory: hysteresis flag and last good values.
struct FlatnessContext {
  bool in_zero_velocity = false;
  std::optional<Vec3> last_wind_axis;
  std::optional<Vec3> last_body_rate;
};

/// Unit airspeed direction, or nullopt (zero velocity) when
/// |v - v_wind| < threshold.
std::optional<Vec3> wind_axis(const Vec3& v, const Vec3& v_wind, double threshold = 0.3);

struct WindFrameAccel {
  double xw = 0.0;
  double zw = 0.0;  // always <= 0
};

/// Required specific force (a - g) split into the x_w component and the
/// (negated) magnitude of its remainder.
WindFrameAccel wind_frame_accels(const Vec3& x_w, const Vec3& a);

struct ThrustAlpha {
  double thrust = 0.0;
  double alpha = 0.0;
};

/// Closed-form solution of the wind-frame force balance
///   m a_xw = f sin(a - k) - qS (cd0 + cla sin^2 a)
///   m a_zw = f cos(a - k) - qS cla sin a cos a
/// with q the dynamic pressure. Picks the root with f <= 0.
/// Returns nullopt when the balance is degenerate (k1 below `eps`).
std::optional<ThrustAlpha> thrust_alpha(const AeroParams& params, double airspeed, double a_xw,
                                        double a_zw, double eps = 1e-9);

struct AttitudeSolution {
  Mat3 attitude = Mat3::Identity();
  double alpha = 0.0;
  double thrust = 0.0;
  Vec3 wind_axis = Vec3::UnitX();
  Vec3 y_perp = Vec3::Zero();
  WindFrameAccel accel;
};

/// Regular (non-singular) attitude construction. Returns nullopt when the
/// airspeed is below the zero-velocity threshold, when x_w and y_perp are
/// aligned, or when the force balance is degenerate.
std::optional<AttitudeSolution> attitude_from_flat(const AeroParams& params, const FlatSample& sample,
                                                   const Vec3& v_wind = Vec3::Zero(),
                                                   const FlatnessOptions& options = {});

/// Body rate from the derivative of the force balance (x_b and y_b rows) and
/// the coordinated-turn constraint w_x v_zb - w_z v_xb = -g_yb. Returns
/// nullopt when the 3x3 system is singular.
std::optional<Vec3> angular_velocity_from_flat(const AeroParams& params, const FlatSample& sample,
                                               const Mat3& attitude, double thrust,
                                               const Vec3& v_wind = Vec3::Zero(),
                                               const FlatnessOptions& options = {});

/// Total transform with singularity handling. `ctx` carries hysteresis and
/// hold-last state between successive samples of one stream.
FlatnessOutput flatness_transform(const AeroParams& params, const FlatSample& sample,
                                  FlatnessContext& ctx, const Vec3& v_wind = Vec3::Zero(),
                                  const FlatnessOptions& options = {});

/// Stateless convenience overload (fresh context).
FlatnessOutput flatness_transform(const AeroParams& params, const FlatSample& sample,
                                  const Vec3& v_wind = Vec3::Zero(),
                                  const FlatnessOptions& options = {});

}  // namespace lwq
