#include "lwq/aero.hpp"

#include <cmath>
#include <stdexcept>

namespace lwq {

void AeroParams::validate() const {
  if (!(mass > 0.0)) throw std::invalid_argument("aero: mass must be positive");
  if (!(rho > 0.0)) throw std::invalid_argument("aero: rho must be positive");
  if (!(wing_area >= 0.0)) throw std::invalid_argument("aero: wing_area must be >= 0");
  if (!(cd0 >= 0.0) || !(cy0 >= 0.0) || !(cl_alpha >= 0.0)) {
    throw std::invalid_argument("aero: coefficients must be >= 0");
  }
  if (!(kappa > deg_to_rad(15.0) && kappa <= deg_to_rad(90.0) + 1e-12)) {
    throw std::invalid_argument("aero: kappa must lie in (15, 90] degrees");
  }
}

AeroParams AeroParams::without_aero() const {
  AeroParams out = *this;
  out.cd0 = 0.0;
  out.cy0 = 0.0;
  out.cl_alpha = 0.0;
  return out;
}

AeroParams AeroParams::with_scaled_coefficients(double factor) const {
  AeroParams out = *this;
  out.cd0 *= factor;
  out.cy0 *= factor;
  out.cl_alpha *= factor;
  return out;
}

Mat3 DragMatrix::matrix() const {
  Mat3 d;
  d << cdx, 0.0, cdxz,
       0.0, cy0, 0.0,
       cdxz, 0.0, cdz;
  return d;
}

Mat3 r_b_l(double kappa) {
  const double c = std::cos(kappa);
  const double s = std::sin(kappa);
  Mat3 r;
  r << c, 0.0, -s,
       0.0, 1.0, 0.0,
       s, 0.0, c;
  return r;
}

Mat3 r_l_w(double alpha) {
  const double c = std::cos(alpha);
  const double s = std::sin(alpha);
  Mat3 r;
  r << c, 0.0, s,
       0.0, 1.0, 0.0,
       -s, 0.0, c;
  return r;
}

Vec3 aero_force_wind_frame(const AeroParams& params, double airspeed, double alpha) {
  const double qs = 0.5 * params.rho * params.wing_area * airspeed * airspeed;
  const double s = std::sin(alpha);
  const double c = std::cos(alpha);
  return qs * Vec3(params.cd0 + params.cl_alpha * s * s, 0.0, params.cl_alpha * s * c);
}

Vec3 aero_force_l_frame(const AeroParams& params, const Mat3& r_b_e, const Vec3& v_air) {
  const Vec3 coeffs(params.cd0, params.cy0, params.cd0 + params.cl_alpha);
  const Vec3 v_l = r_b_l(params.kappa) * (r_b_e.transpose() * v_air);
  return -0.5 * params.rho * params.wing_area * v_air.norm() * coeffs.cwiseProduct(v_l);
}

DragMatrix drag_matrix(const AeroParams& params) {
  const double c = std::cos(params.kappa);
  const double s = std::sin(params.kappa);
  DragMatrix d;
  d.cdx = params.cd0 * c * c + (params.cl_alpha + params.cd0) * s * s;
  d.cdz = params.cd0 * s * s + (params.cl_alpha + params.cd0) * c * c;
  d.cdxz = params.cl_alpha * s * c;
  d.cy0 = params.cy0;
  return d;
}

Vec3 aero_accel_earth(const AeroParams& params, const Mat3& r_b_e, const Vec3& v_air) {
  const double qa = params.rho * params.wing_area * v_air.norm() / (2.0 * params.mass);
  const Mat3 d = drag_matrix(params).matrix();
  return -qa * (r_b_e * d * r_b_e.transpose() * v_air);
}

double angle_of_attack(const AeroParams& params, const Mat3& r_b_e, const Vec3& v_air) {
  const Vec3 v_l = r_b_l(params.kappa) * (r_b_e.transpose() * v_air);
  if (v_l.x() == 0.0 && v_l.z() == 0.0) {
    return params.kappa;
  }
  return std::atan2(v_l.z(), v_l.x());
}

}  // namespace lwq
