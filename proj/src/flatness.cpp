#include "lwq/flatness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lwq {
namespace {

double wing_pressure_gain(const AeroParams& params, double airspeed) {
  return params.rho * params.wing_area * airspeed / (2.0 * params.mass);
}

Vec3 compute_y_perp(const AeroParams& params, const FlatSample& sample, const Vec3& v_air) {
  const double qa = wing_pressure_gain(params, v_air.norm());
  return qa * params.cy0 * v_air - gravity_vector() + sample.a;
}

Mat3 from_columns(const Vec3& x_b, const Vec3& y_b) {
  Mat3 r;
  r.col(0) = x_b;
  r.col(1) = y_b;
  r.col(2) = x_b.cross(y_b);
  return r;
}

// Heading-driven attitude used when x_w is undefined or parallel to y_perp:
// y_b = c x y_perp, x_b = y_perp x y_b for the first admissible heading c.
FlatnessOutput singular_attitude(const AeroParams& params, const FlatSample& sample,
                                 const Vec3& v_wind, const FlatnessContext& ctx,
                                 const FlatnessOptions& options, SingularCase which) {
  const Vec3 v_air = sample.v - v_wind;
  const Vec3 y_perp = compute_y_perp(params, sample, v_air);
  const double yaw = sample.yaw_fallback;

  FlatnessOutput out;
  out.singular_case = which;

  Vec3 candidates[4];
  int n = 0;
  if (options.hold_last_wind_axis && ctx.last_wind_axis) {
    candidates[n++] = *ctx.last_wind_axis;
  }
  candidates[n++] = Vec3(std::cos(yaw), std::sin(yaw), 0.0);
  candidates[n++] = Vec3(-std::sin(yaw), std::cos(yaw), 0.0);
  candidates[n++] = Vec3::UnitZ();

  const double yp_norm = y_perp.norm();
  bool built = false;
  if (yp_norm > 1e-12) {
    for (int i = 0; i < n && !built; ++i) {
      const Vec3 cross = candidates[i].cross(y_perp);
      if (cross.norm() >= options.cross_eps * candidates[i].norm() * yp_norm) {
        const Vec3 y_b = cross.normalized();
        const Vec3 x_b = y_perp.cross(y_b).normalized();
        out.attitude = from_columns(x_b, y_b);
        out.wind_axis = candidates[i].normalized();
        built = true;
      }
    }
  }
  if (!built) {
    // Free-fall reference: no thrust direction is implied; keep the yaw.
    out.attitude = rodrigues(Vec3::UnitZ(), yaw);
    out.wind_axis = out.attitude.col(0);
  }

  const Vec3 rotor_accel = sample.a - gravity_vector() - aero_accel_earth(params, out.attitude, v_air);
  out.thrust = std::min(0.0, params.mass * out.attitude.col(2).dot(rotor_accel));
  out.alpha = angle_of_attack(params, out.attitude, v_air);
  const WindFrameAccel acc = wind_frame_accels(out.wind_axis, sample.a);
  out.accel_xw = acc.xw;
  out.accel_zw = acc.zw;
  out.body_rate = Vec3::Zero();
  return out;
}

}  // namespace

const char* to_string(SingularCase c) {
  switch (c) {
    case SingularCase::None: return "none";
    case SingularCase::ZeroVelocity: return "zero_velocity";
    case SingularCase::AlignedYPerp: return "aligned_y_perp";
  }
  return "unknown";
}

std::optional<Vec3> wind_axis(const Vec3& v, const Vec3& v_wind, double threshold) {
  const Vec3 v_air = v - v_wind;
  const double speed = v_air.norm();
  if (!(speed >= threshold) || speed == 0.0) {
    return std::nullopt;
  }
  return v_air / speed;
}

WindFrameAccel wind_frame_accels(const Vec3& x_w, const Vec3& a) {
  const Vec3 specific = a - gravity_vector();
  const double along = x_w.dot(specific);
  const Vec3 rest = specific - x_w * along;
  return {along, -rest.norm()};
}

std::optional<ThrustAlpha> thrust_alpha(const AeroParams& params, double airspeed, double a_xw,
                                        double a_zw, double eps) {
  const double m = params.mass;
  const double qs = 0.5 * params.rho * airspeed * airspeed * params.wing_area;
  const double lift = params.cl_alpha * qs;
  const double k_fxw = params.cd0 * qs + m * a_xw;
  const double sk = std::sin(params.kappa);
  const double ck = std::cos(params.kappa);
  const double maz = m * a_zw;

  const double k1_sq = k_fxw * k_fxw * ck * ck + (k_fxw + lift) * (k_fxw + lift) * sk * sk +
                       maz * maz - maz * lift * std::sin(2.0 * params.kappa);
  const double k1 = std::sqrt(std::max(0.0, k1_sq));
  if (!(k1 >= eps)) {
    return std::nullopt;
  }

  // Half-angle root of (k cos k + m a_zw sin k) cos a + ((k + L) sin k - m a_zw cos k) sin a = 0.
  const double num = (lift + k_fxw) * sk - maz * ck - k1;
  const double den = k_fxw * ck + maz * sk;
  double alpha = 2.0 * std::atan2(num, den);

  // The signed thrust of this root is -(k^2 + L k + m^2 a_zw^2) / k1; the
  // other root (alpha + pi) carries the opposite sign.
  const double signed_term = k_fxw * k_fxw + lift * k_fxw + maz * maz;
  if (signed_term < 0.0) {
    alpha += std::numbers::pi;
  }
  return ThrustAlpha{-std::abs(signed_term) / k1, wrap_pi(alpha)};
}

std::optional<AttitudeSolution> attitude_from_flat(const AeroParams& params, const FlatSample& sample,
                                                   const Vec3& v_wind, const FlatnessOptions& options) {
  const Vec3 v_air = sample.v - v_wind;
  const auto x_w = wind_axis(sample.v, v_wind, options.zero_velocity_enter);
  if (!x_w) {
    return std::nullopt;
  }

  AttitudeSolution sol;
  sol.wind_axis = *x_w;
  sol.accel = wind_frame_accels(*x_w, sample.a);
  sol.y_perp = compute_y_perp(params, sample, v_air);

  const Vec3 cross = x_w->cross(sol.y_perp);
  if (cross.norm() < options.cross_eps * std::max(sol.y_perp.norm(), 1e-12)) {
    return std::nullopt;
  }
  const auto ta = thrust_alpha(params, v_air.norm(), sol.accel.xw, sol.accel.zw, options.balance_eps);
  if (!ta) {
    return std::nullopt;
  }
  sol.thrust = ta->thrust;
  sol.alpha = ta->alpha;

  const Vec3 y_b = cross.normalized();
  const Vec3 x_b = rodrigues(y_b, sol.alpha - params.kappa) * (*x_w);
  sol.attitude = from_columns(x_b, y_b);
  return sol;
}

std::optional<Vec3> angular_velocity_from_flat(const AeroParams& params, const FlatSample& sample,
                                               const Mat3& attitude, double thrust,
                                               const Vec3& v_wind, const FlatnessOptions& options) {
  const Vec3 v_air = sample.v - v_wind;
  const double speed_sq = v_air.squaredNorm();
  const double qa = wing_pressure_gain(params, std::sqrt(speed_sq));
  const double cz = thrust / params.mass;
  const Mat3 d = drag_matrix(params).matrix();

  const Mat3 rt = attitude.transpose();
  const Vec3 bv = rt * v_air;
  const Vec3 ba = rt * sample.a;
  const Vec3 bj = rt * sample.j;
  const Vec3 u = d * bv;
  const double speed_rate = speed_sq > 0.0 ? v_air.dot(sample.a) / speed_sq : 0.0;

  // Body-frame derivative of the force balance, rows x and y (the z row
  // carries the thrust rate and is not needed):
  //   bj + qa (s u + D ba) = dcz e_z - cz [e_z]x w - qa (D [bv]x - [u]x) w
  const Mat3 coupling = -cz * skew(Vec3::UnitZ()) - qa * (d * skew(bv) - skew(u));
  const Vec3 rhs_full = bj + qa * (speed_rate * u + d * ba);

  Mat3 a_mat;
  Vec3 rhs;
  a_mat.row(0) = coupling.row(0);
  a_mat.row(1) = coupling.row(1);
  rhs(0) = rhs_full(0);
  rhs(1) = rhs_full(1);
  // Coordinated turn: w_x v_zb - w_z v_xb = -g_yb.
  a_mat.row(2) << bv.z(), 0.0, -bv.x();
  rhs(2) = -kGravity * attitude(2, 1);

  const double scale = a_mat.norm();
  if (!(std::abs(a_mat.determinant()) >= options.det_eps * scale * scale * scale) || scale == 0.0) {
    return std::nullopt;
  }
  return Vec3(a_mat.fullPivLu().solve(rhs));
}

FlatnessOutput flatness_transform(const AeroParams& params, const FlatSample& sample,
                                  FlatnessContext& ctx, const Vec3& v_wind,
                                  const FlatnessOptions& options) {
  const double speed = (sample.v - v_wind).norm();
  if (ctx.in_zero_velocity) {
    ctx.in_zero_velocity = !(speed > options.zero_velocity_exit);
  } else {
    ctx.in_zero_velocity = speed < options.zero_velocity_enter;
  }

  if (ctx.in_zero_velocity) {
    return singular_attitude(params, sample, v_wind, ctx, options, SingularCase::ZeroVelocity);
  }

  const auto sol = attitude_from_flat(params, sample, v_wind, options);
  if (!sol) {
    return singular_attitude(params, sample, v_wind, ctx, options, SingularCase::AlignedYPerp);
  }

  FlatnessOutput out;
  out.attitude = sol->attitude;
  out.thrust = sol->thrust;
  out.alpha = sol->alpha;
  out.wind_axis = sol->wind_axis;
  out.accel_xw = sol->accel.xw;
  out.accel_zw = sol->accel.zw;
  out.singular_case = SingularCase::None;

  const auto rate = angular_velocity_from_flat(params, sample, sol->attitude, sol->thrust, v_wind, options);
  out.body_rate = rate ? *rate : ctx.last_body_rate.value_or(Vec3::Zero());

  ctx.last_wind_axis = sol->wind_axis;
  ctx.last_body_rate = out.body_rate;
  return out;
}

FlatnessOutput flatness_transform(const AeroParams& params, const FlatSample& sample,
                                  const Vec3& v_wind, const FlatnessOptions& options) {
  FlatnessContext ctx;
  return flatness_transform(params, sample, ctx, v_wind, options);
}

}  // namespace lwq
