#include "lwq/trajectories.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace lwq {
namespace {

// Phase angle and its first three time derivatives.
struct Phase {
  double th, d1, d2, d3;
};

// Third-order chain rule for p(t) = f(th(t)) given f and its derivatives at th.
FlatSample compose(const Vec3& f, const Vec3& f1, const Vec3& f2, const Vec3& f3, const Phase& ph) {
  FlatSample s;
  s.p = f;
  s.v = f1 * ph.d1;
  s.a = f2 * ph.d1 * ph.d1 + f1 * ph.d2;
  s.j = f3 * ph.d1 * ph.d1 * ph.d1 + 3.0 * f2 * ph.d1 * ph.d2 + f1 * ph.d3;
  return s;
}

Phase circle_phase(const TrajectoryDef& def, double t) {
  const double t_switch = circle_switch_time(def);
  if (t < t_switch) {
    return {0.5 * def.omega * t * t, def.omega * t, def.omega, 0.0};
  }
  const double rate = def.omega * t_switch;
  return {0.5 * def.omega * t_switch * t_switch + rate * (t - t_switch), rate, 0.0, 0.0};
}

}  // namespace

void TrajectoryDef::validate() const {
  if (!p0.allFinite()) throw std::invalid_argument("trajectory: p0 must be finite");
  if (!(radius >= 0.0)) throw std::invalid_argument("trajectory: radius must be >= 0");
  if (!(omega >= 0.0)) throw std::invalid_argument("trajectory: omega must be >= 0");
  if ((kind == TrajectoryKind::Circle || kind == TrajectoryKind::Line) && !(speed_cap > 0.0)) {
    throw std::invalid_argument("trajectory: speed_cap must be positive");
  }
}

TrajectoryDef TrajectoryDef::circle(double radius, double omega, double speed_cap) {
  TrajectoryDef def;
  def.kind = TrajectoryKind::Circle;
  def.radius = radius;
  def.omega = omega;
  def.speed_cap = speed_cap;
  // Initial direction of travel is +y.
  def.yaw_fallback = std::numbers::pi / 2.0;
  return def;
}

TrajectoryDef TrajectoryDef::lemniscate(double radius, double omega) {
  TrajectoryDef def;
  def.kind = TrajectoryKind::Lemniscate;
  def.radius = radius;
  def.omega = omega;
  def.yaw_fallback = std::numbers::pi / 2.0;
  return def;
}

TrajectoryDef TrajectoryDef::hover(const Vec3& p0, double yaw) {
  TrajectoryDef def;
  def.kind = TrajectoryKind::Hover;
  def.p0 = p0;
  def.radius = 0.0;
  def.omega = 0.0;
  def.yaw_fallback = yaw;
  return def;
}

TrajectoryDef TrajectoryDef::line(double speed, double yaw) {
  TrajectoryDef def;
  def.kind = TrajectoryKind::Line;
  def.speed_cap = speed;
  def.yaw_fallback = yaw;
  return def;
}

double circle_switch_time(const TrajectoryDef& def) {
  const double rate = def.radius * def.omega;
  if (rate <= 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return def.speed_cap / rate;
}

FlatSample sample(const TrajectoryDef& def, double t) {
  if (!(t >= 0.0)) {
    throw std::invalid_argument("trajectory: sample time must be >= 0");
  }
  FlatSample s;
  const double r = def.radius;
  switch (def.kind) {
    case TrajectoryKind::Circle: {
      const Phase ph = circle_phase(def, t);
      const double c = std::cos(ph.th);
      const double sn = std::sin(ph.th);
      s = compose(Vec3(r * (1.0 - c), r * sn, 0.0), Vec3(r * sn, r * c, 0.0),
                  Vec3(r * c, -r * sn, 0.0), Vec3(-r * sn, -r * c, 0.0), ph);
      break;
    }
    case TrajectoryKind::Lemniscate: {
      // Phase is w t; x uses half the phase.
      const Phase ph{def.omega * t, def.omega, 0.0, 0.0};
      const double ch = std::cos(0.5 * ph.th);
      const double sh = std::sin(0.5 * ph.th);
      const double c = std::cos(ph.th);
      const double sn = std::sin(ph.th);
      s = compose(Vec3(r * (1.0 - ch), r * sn, 0.0), Vec3(0.5 * r * sh, r * c, 0.0),
                  Vec3(0.25 * r * ch, -r * sn, 0.0), Vec3(-0.125 * r * sh, -r * c, 0.0), ph);
      break;
    }
    case TrajectoryKind::Hover:
      break;
    case TrajectoryKind::Line: {
      const Vec3 dir(std::cos(def.yaw_fallback), std::sin(def.yaw_fallback), 0.0);
      s.p = def.speed_cap * t * dir;
      s.v = def.speed_cap * dir;
      break;
    }
  }
  s.p += def.p0;
  s.yaw_fallback = def.yaw_fallback;
  return s;
}

double derivative_check(const TrajectoryDef& def, double t, double h) {
  if (!(h > 0.0)) {
    throw std::invalid_argument("derivative_check: h must be positive");
  }
  // Stay inside t >= 0 by shifting to a forward-centred stencil near the origin.
  const double tc = std::max(t, h);
  const FlatSample lo = sample(def, tc - h);
  const FlatSample mid = sample(def, tc);
  const FlatSample hi = sample(def, tc + h);

  auto rel = [](const Vec3& numeric, const Vec3& analytic) {
    return (numeric - analytic).norm() / std::max(1.0, analytic.norm());
  };
  const double ev = rel((hi.p - lo.p) / (2.0 * h), mid.v);
  const double ea = rel((hi.v - lo.v) / (2.0 * h), mid.a);
  const double ej = rel((hi.a - lo.a) / (2.0 * h), mid.j);
  return std::max({ev, ea, ej});
}

const char* to_string(TrajectoryKind kind) {
  switch (kind) {
    case TrajectoryKind::Circle: return "circle";
    case TrajectoryKind::Lemniscate: return "lemniscate";
    case TrajectoryKind::Hover: return "hover";
    case TrajectoryKind::Line: return "line";
  }
  return "unknown";
}

}  // namespace lwq
