#pragma once

#include "lwq/geom.hpp"

namespace lwq {

/// A point of the flat output: position and its first three derivatives.
struct FlatSample {
  Vec3 p = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  Vec3 a = Vec3::Zero();
  Vec3 j = Vec3::Zero();
  double yaw_fallback = 0.0;  // rad, only consulted when the heading is undefined
};

enum class TrajectoryKind { Circle, Lemniscate, Hover, Line };

// Circle:     p0 + r [1 - cos(th), sin(th), 0], th = 0.5 w t^2 until
//             |v| = r w t reaches speed_cap, then th grows at speed_cap / r.
// Lemniscate: p0 + r [1 - cos(0.5 w t), sin(w t), 0] (Gerono, period 4 pi / w).
// Hover:      p0.
// Line:       p0 + speed_cap t [cos(yaw), sin(yaw), 0].
struct TrajectoryDef {
  TrajectoryKind kind = TrajectoryKind::Circle;
  Vec3 p0 = Vec3(0.0, 0.0, -10.0);
  double radius = 15.0;
  double omega = 0.06;
  double speed_cap = 10.0;
  double yaw_fallback = 0.0;

  void validate() const;

  static TrajectoryDef circle(double radius = 15.0, double omega = 0.06, double speed_cap = 10.0);
  static TrajectoryDef lemniscate(double radius = 20.0, double omega = 0.33);
  static TrajectoryDef hover(const Vec3& p0 = Vec3(0.0, 0.0, -10.0), double yaw = 0.0);
  static TrajectoryDef line(double speed, double yaw);
};

/// Time at which the accelerating circle reaches speed_cap.
double circle_switch_time(const TrajectoryDef& def);

/// Analytic sample with exact derivatives through jerk. Requires t >= 0.
FlatSample sample(const TrajectoryDef& def, double t);

/// Max relative error of central differences of (p, v, a) at step h against the
/// analytic (v, a, j). Errors are scaled by max(1, |analytic|).
double derivative_check(const TrajectoryDef& def, double t, double h);

const char* to_string(TrajectoryKind kind);

}  // namespace lwq
