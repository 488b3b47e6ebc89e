#pragma once

#include <numbers>

#include "lwq/geom.hpp"

namespace lwq {

inline constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

// Lifting-wing parameters. The defaults describe a ~1.5 kg airframe with a
// 34 degree installation angle; they are plausible values, not measured ones.
struct AeroParams {
  double mass = 1.5;                  // kg
  double kappa = deg_to_rad(34.0);    // rad, wing installation angle
  double rho = 1.225;                 // kg/m^3
  double wing_area = 0.2;             // m^2
  double cd0 = 0.05;
  double cy0 = 0.0;
  double cl_alpha = 2.0;

  /// Throws std::invalid_argument when a physical bound is violated
  /// (m > 0, rho > 0, S >= 0, coefficients >= 0, kappa in (15 deg, 90 deg]).
  void validate() const;

  /// Same airframe with every aerodynamic coefficient set to zero.
  AeroParams without_aero() const;

  /// Coefficients (cd0, cy0, cl_alpha) multiplied by `factor`.
  AeroParams with_scaled_coefficients(double factor) const;
};

struct DragMatrix {
  double cdx = 0.0;
  double cdz = 0.0;
  double cdxz = 0.0;
  double cy0 = 0.0;

  /// [[cdx, 0, cdxz], [0, cy0, 0], [cdxz, 0, cdz]]
  Mat3 matrix() const;
};

/// Body -> lifting-wing frame rotation for installation angle kappa.
Mat3 r_b_l(double kappa);

/// Lifting-wing -> wind frame rotation for angle of attack alpha.
Mat3 r_l_w(double alpha);

// Sign convention: aero_force_wind_frame returns the drag / side / lift
// magnitudes along (x_w, y_w, z_w) exactly as the parametric model writes them;
// the physical force is the negation (drag along -x_w, lift along -z_w).
// aero_force_l_frame and aero_accel_earth return the physical, signed force.

/// 1/2 rho S Va^2 [cd0 + cla sin^2(a), 0, cla sin(a) cos(a)].
Vec3 aero_force_wind_frame(const AeroParams& params, double airspeed, double alpha);

/// Physical wing force in the lifting-wing frame for earth-frame airspeed
/// vector `v_air` and body attitude `r_b_e`:
/// -1/2 rho S |v_air| diag(cd0, cy0, cd0 + cla) R_b^l (R_b^e)^T v_air.
Vec3 aero_force_l_frame(const AeroParams& params, const Mat3& r_b_e, const Vec3& v_air);

DragMatrix drag_matrix(const AeroParams& params);

/// Earth-frame acceleration of the wing force:
/// -(rho S |v_air| / 2m) R D R^T v_air.
Vec3 aero_accel_earth(const AeroParams& params, const Mat3& r_b_e, const Vec3& v_air);

/// Angle between the chord x_l and the airspeed in the wing symmetry plane.
/// Returns kappa when v_air is zero (body level, wing at its installed angle).
double angle_of_attack(const AeroParams& params, const Mat3& r_b_e, const Vec3& v_air);

}  // namespace lwq
