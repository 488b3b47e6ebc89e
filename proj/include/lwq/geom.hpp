#pragma once

#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Geometry>

namespace lwq {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
// Scalar-first in construction (w, x, y, z); unit norm is the caller's contract.
using UnitQuaternion = Eigen::Quaterniond;

// NED world frame: gravity points along +z.
inline constexpr double kGravity = 9.81;
inline Vec3 gravity_vector() { return Vec3(0.0, 0.0, kGravity); }

class NonUnitAxis : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NonOrthonormal : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Attitude error in axis-angle form. |angle| <= pi and vector.norm() == |angle|.
struct AxisAngleError {
  double angle = 0.0;
  Vec3 vector = Vec3::Zero();
};

/// [v]x such that skew(v) * w == v.cross(w).
Mat3 skew(const Vec3& v);

/// Inverse of skew(); reads the antisymmetric part of m.
Vec3 vee(const Mat3& m);

/// Rotation by `angle` about the unit `axis`:
/// cos(t) I + (1 - cos(t)) a a^T + sin(t) [a]x.
/// Throws NonUnitAxis when |‖axis‖ - 1| > 1e-6.
Mat3 rodrigues(const Vec3& axis, double angle);

/// Wraps an angle into [-pi, pi].
double wrap_pi(double angle);

/// Shortest-path axis-angle extraction. Below |angle| < 1e-6 the
/// angle/sin(angle/2) factor is replaced by its second-order series.
AxisAngleError quat_to_axis_angle(const UnitQuaternion& q);

/// Throws NonOrthonormal if ‖R^T R - I‖_F > 1e-6 or det(R) <= 0.
UnitQuaternion mat_to_quat(const Mat3& r);
Mat3 quat_to_mat(const UnitQuaternion& q);
UnitQuaternion quat_mul(const UnitQuaternion& a, const UnitQuaternion& b);
UnitQuaternion quat_conj(const UnitQuaternion& q);

/// ‖R^T R - I‖_F.
double orthonormality_residual(const Mat3& r);

/// Nearest proper rotation (polar decomposition).
Mat3 orthonormalize(const Mat3& r);

}  // namespace lwq
