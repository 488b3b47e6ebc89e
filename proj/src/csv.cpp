#include "lwq/csv.hpp"

#include <cstdio>
#include <string>

namespace lwq {
namespace {

class RowWriter {
 public:
  explicit RowWriter(std::ostream& out) : out_(out) {}

  RowWriter& real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return text(buf);
  }
  RowWriter& vec(const Vec3& v) { return real(v.x()).real(v.y()).real(v.z()); }
  RowWriter& quat(const UnitQuaternion& q) { return real(q.w()).real(q.x()).real(q.y()).real(q.z()); }
  RowWriter& integer(long v) { return text(std::to_string(v)); }
  RowWriter& text(const std::string& s) {
    if (!first_) {
      out_ << ',';
    }
    out_ << s;
    first_ = false;
    return *this;
  }
  void end() {
    out_ << '\n';
    first_ = true;
  }

 private:
  std::ostream& out_;
  bool first_ = true;
};

// Quote a free-text field if it contains a separator.
std::string escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (char c : s) {
    out += c == '"' ? std::string("\"\"") : std::string(1, c);
  }
  return out + "\"";
}

}  // namespace

void write_trace_csv(std::ostream& out, const std::vector<LogRow>& rows) {
  out << "t,px,py,pz,prx,pry,prz,vx,vy,vz,qw,qx,qy,qz,qdw,qdx,qdy,qdz,fz,wx,wy,wz,alpha,singular\n";
  RowWriter w(out);
  for (const LogRow& r : rows) {
    w.real(r.t).vec(r.p).vec(r.p_ref).vec(r.v).quat(r.q).quat(r.q_d).real(r.thrust).vec(r.body_rate)
        .real(r.alpha).integer(static_cast<int>(r.singular));
    w.end();
  }
}

void write_flat_csv(std::ostream& out, const std::vector<FlatRow>& rows) {
  out << "t,prx,pry,prz,vrx,vry,vrz,arx,ary,arz,jrx,jry,jrz,qw,qx,qy,qz,fz,wx,wy,wz,alpha,axw,azw,singular\n";
  RowWriter w(out);
  for (const FlatRow& r : rows) {
    w.real(r.t).vec(r.sample.p).vec(r.sample.v).vec(r.sample.a).vec(r.sample.j)
        .quat(mat_to_quat(r.output.attitude)).real(r.output.thrust).vec(r.output.body_rate)
        .real(r.output.alpha).real(r.output.accel_xw).real(r.output.accel_zw)
        .integer(static_cast<int>(r.output.singular_case));
    w.end();
  }
}

void write_compare_csv(std::ostream& out, const std::vector<ConditionCell>& cells) {
  out << "condition,ok,rmse,peak_error,diverged,divergence_time,divergence_speed,error\n";
  RowWriter w(out);
  for (const ConditionCell& c : cells) {
    w.text(c.name).integer(c.ok ? 1 : 0).real(c.rmse).real(c.peak_error).integer(c.diverged ? 1 : 0)
        .real(c.divergence_time).real(c.divergence_speed).text(escape(c.error));
    w.end();
  }
}

}  // namespace lwq
