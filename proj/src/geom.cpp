#include "lwq/geom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lwq {

Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
      -v.y(), v.x(), 0.0;
  return m;
}

Vec3 vee(const Mat3& m) {
  return 0.5 * Vec3(m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1));
}

Mat3 rodrigues(const Vec3& axis, double angle) {
  if (std::abs(axis.norm() - 1.0) > 1e-6) {
    throw NonUnitAxis("rodrigues: axis is not unit length");
  }
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return c * Mat3::Identity() + (1.0 - c) * axis * axis.transpose() + s * skew(axis);
}

double wrap_pi(double angle) {
  constexpr double pi = std::numbers::pi;
  if (angle >= -pi && angle <= pi) {
    return angle;
  }
  double wrapped = std::fmod(angle + pi, 2.0 * pi);
  if (wrapped < 0.0) {
    wrapped += 2.0 * pi;
  }
  return wrapped - pi;
}

AxisAngleError quat_to_axis_angle(const UnitQuaternion& q) {
  const double q0 = std::clamp(q.w(), -1.0, 1.0);
  const Vec3 qv = q.vec();
  const double angle = wrap_pi(2.0 * std::acos(q0));
  const double sign = q0 < 0.0 ? -1.0 : 1.0;

  double scale;
  if (std::abs(angle) < 1e-6) {
    scale = 2.0 * (1.0 + angle * angle / 24.0);
  } else {
    scale = angle / std::sin(0.5 * angle);
  }
  return {angle, sign * scale * qv};
}

double orthonormality_residual(const Mat3& r) {
  return (r.transpose() * r - Mat3::Identity()).norm();
}

UnitQuaternion mat_to_quat(const Mat3& r) {
  if (!r.allFinite() || orthonormality_residual(r) > 1e-6 || r.determinant() <= 0.0) {
    throw NonOrthonormal("mat_to_quat: input is not a proper rotation");
  }
  UnitQuaternion q(r);
  q.normalize();
  return q;
}

Mat3 quat_to_mat(const UnitQuaternion& q) { return q.normalized().toRotationMatrix(); }

UnitQuaternion quat_mul(const UnitQuaternion& a, const UnitQuaternion& b) { return a * b; }

UnitQuaternion quat_conj(const UnitQuaternion& q) { return q.conjugate(); }

Mat3 orthonormalize(const Mat3& r) {
  Eigen::JacobiSVD<Mat3> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 u = svd.matrixU();
  const Mat3 v = svd.matrixV();
  if ((u * v.transpose()).determinant() < 0.0) {
    u.col(2) *= -1.0;
  }
  return u * v.transpose();
}

}  // namespace lwq
