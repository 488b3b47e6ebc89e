#include "lwq/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace lwq {
namespace {

enum class ValueKind { Real, Angle, Integer, Boolean, Kind };

// One accepted key: its value kind and accessors into the config.
struct Field {
  ValueKind kind;
  std::function<double&(ExperimentConfig&)> real;
  std::function<void(ExperimentConfig&, std::string_view)> set_text;
  std::function<std::string(const ExperimentConfig&)> get_text;
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_real(std::string_view key, std::string_view text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw ConfigError("config: '" + std::string(key) + "' expects a real number, got '" +
                      std::string(text) + "'");
  }
  return value;
}

std::string format_real(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ConfigError("config: '" + std::string(key) + "' expects true/false, got '" + std::string(text) + "'");
}

TrajectoryKind parse_kind(std::string_view text) {
  for (TrajectoryKind k : {TrajectoryKind::Circle, TrajectoryKind::Lemniscate, TrajectoryKind::Hover,
                           TrajectoryKind::Line}) {
    if (text == to_string(k)) {
      return k;
    }
  }
  throw ConfigError("config: unknown trajectory.kind '" + std::string(text) + "'");
}

using Registry = std::vector<std::pair<std::string, Field>>;

void add_real(Registry& reg, std::string key, std::function<double&(ExperimentConfig&)> ref,
              ValueKind kind = ValueKind::Real) {
  Field f;
  f.kind = kind;
  f.real = ref;
  reg.emplace_back(std::move(key), std::move(f));
}

void add_vec(Registry& reg, const std::string& prefix, std::function<Vec3&(ExperimentConfig&)> ref) {
  const char* axes[] = {"x", "y", "z"};
  for (int i = 0; i < 3; ++i) {
    add_real(reg, prefix + "." + axes[i], [ref, i](ExperimentConfig& c) -> double& { return ref(c)(i); });
  }
}

void add_aero(Registry& reg, const std::string& prefix, std::function<AeroParams&(ExperimentConfig&)> ref) {
  add_real(reg, prefix + ".mass", [ref](ExperimentConfig& c) -> double& { return ref(c).mass; });
  add_real(reg, prefix + ".kappa_deg", [ref](ExperimentConfig& c) -> double& { return ref(c).kappa; },
           ValueKind::Angle);
  add_real(reg, prefix + ".rho", [ref](ExperimentConfig& c) -> double& { return ref(c).rho; });
  add_real(reg, prefix + ".wing_area", [ref](ExperimentConfig& c) -> double& { return ref(c).wing_area; });
  add_real(reg, prefix + ".cd0", [ref](ExperimentConfig& c) -> double& { return ref(c).cd0; });
  add_real(reg, prefix + ".cy0", [ref](ExperimentConfig& c) -> double& { return ref(c).cy0; });
  add_real(reg, prefix + ".cl_alpha", [ref](ExperimentConfig& c) -> double& { return ref(c).cl_alpha; });
}

void add_bool(Registry& reg, std::string key, std::function<bool&(ExperimentConfig&)> ref) {
  Field f;
  f.kind = ValueKind::Boolean;
  f.set_text = [ref, key](ExperimentConfig& c, std::string_view text) { ref(c) = parse_bool(key, text); };
  f.get_text = [ref](const ExperimentConfig& c) {
    return ref(const_cast<ExperimentConfig&>(c)) ? std::string("true") : std::string("false");
  };
  reg.emplace_back(std::move(key), std::move(f));
}

const Registry& registry() {
  static const Registry reg = [] {
    Registry r;
    {
      Field f;
      f.kind = ValueKind::Kind;
      f.set_text = [](ExperimentConfig& c, std::string_view text) { c.trajectory.kind = parse_kind(text); };
      f.get_text = [](const ExperimentConfig& c) { return std::string(to_string(c.trajectory.kind)); };
      r.emplace_back("trajectory.kind", std::move(f));
    }
    add_vec(r, "trajectory.p0", [](ExperimentConfig& c) -> Vec3& { return c.trajectory.p0; });
    add_real(r, "trajectory.radius", [](ExperimentConfig& c) -> double& { return c.trajectory.radius; });
    add_real(r, "trajectory.omega", [](ExperimentConfig& c) -> double& { return c.trajectory.omega; });
    add_real(r, "trajectory.speed_cap", [](ExperimentConfig& c) -> double& { return c.trajectory.speed_cap; });
    add_real(r, "trajectory.yaw_fallback_deg",
             [](ExperimentConfig& c) -> double& { return c.trajectory.yaw_fallback; }, ValueKind::Angle);

    add_aero(r, "plant", [](ExperimentConfig& c) -> AeroParams& { return c.plant.aero; });
    add_vec(r, "plant.wind", [](ExperimentConfig& c) -> Vec3& { return c.plant.wind; });
    add_real(r, "plant.tau_rate", [](ExperimentConfig& c) -> double& { return c.plant.tau_rate; });
    add_real(r, "plant.tau_thrust", [](ExperimentConfig& c) -> double& { return c.plant.tau_thrust; });
    add_real(r, "plant.step", [](ExperimentConfig& c) -> double& { return c.plant.step; });

    add_aero(r, "model", [](ExperimentConfig& c) -> AeroParams& { return c.model; });

    add_vec(r, "gains.kpp", [](ExperimentConfig& c) -> Vec3& { return c.gains.kpp; });
    add_vec(r, "gains.kvp", [](ExperimentConfig& c) -> Vec3& { return c.gains.kvp; });
    add_vec(r, "gains.kvi", [](ExperimentConfig& c) -> Vec3& { return c.gains.kvi; });
    add_vec(r, "gains.kff", [](ExperimentConfig& c) -> Vec3& { return c.gains.kff; });
    add_vec(r, "gains.katt", [](ExperimentConfig& c) -> Vec3& { return c.gains.katt; });
    add_vec(r, "gains.integrator_limit", [](ExperimentConfig& c) -> Vec3& { return c.gains.integrator_limit; });

    add_bool(r, "mode.integrator", [](ExperimentConfig& c) -> bool& { return c.mode.use_integrator; });
    add_bool(r, "mode.aero_feedforward", [](ExperimentConfig& c) -> bool& { return c.mode.use_aero_feedforward; });
    add_bool(r, "mode.rate_feedforward", [](ExperimentConfig& c) -> bool& { return c.mode.use_rate_feedforward; });
    add_bool(r, "mode.legacy_thrust_normalization",
             [](ExperimentConfig& c) -> bool& { return c.mode.legacy_thrust_normalization; });

    add_real(r, "limits.thrust_to_weight", [](ExperimentConfig& c) -> double& { return c.limits.thrust_to_weight; });
    add_real(r, "limits.max_rate", [](ExperimentConfig& c) -> double& { return c.limits.max_rate; });

    add_real(r, "flatness.zero_velocity_enter",
             [](ExperimentConfig& c) -> double& { return c.flatness.zero_velocity_enter; });
    add_real(r, "flatness.zero_velocity_exit",
             [](ExperimentConfig& c) -> double& { return c.flatness.zero_velocity_exit; });
    add_bool(r, "flatness.hold_last_wind_axis",
             [](ExperimentConfig& c) -> bool& { return c.flatness.hold_last_wind_axis; });

    add_real(r, "sim.duration", [](ExperimentConfig& c) -> double& { return c.duration; });
    add_real(r, "sim.control_rate", [](ExperimentConfig& c) -> double& { return c.control_rate; });
    {
      Field f;
      f.kind = ValueKind::Integer;
      f.set_text = [](ExperimentConfig& c, std::string_view text) {
        std::uint64_t value = 0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc() || ptr != text.data() + text.size()) {
          throw ConfigError("config: 'sim.seed' expects a non-negative integer");
        }
        c.seed = value;
      };
      f.get_text = [](const ExperimentConfig& c) { return std::to_string(c.seed); };
      r.emplace_back("sim.seed", std::move(f));
    }
    add_real(r, "sim.abort_radius", [](ExperimentConfig& c) -> double& { return c.abort_radius; });
    add_vec(r, "sim.initial_offset", [](ExperimentConfig& c) -> Vec3& { return c.initial_offset; });
    {
      Field f;
      f.kind = ValueKind::Integer;
      f.set_text = [](ExperimentConfig& c, std::string_view text) {
        int value = 0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc() || ptr != text.data() + text.size()) {
          throw ConfigError("config: 'sensor.delay_ticks' expects an integer");
        }
        c.delay_ticks = value;
      };
      f.get_text = [](const ExperimentConfig& c) { return std::to_string(c.delay_ticks); };
      r.emplace_back("sensor.delay_ticks", std::move(f));
    }
    add_real(r, "sensor.position_noise", [](ExperimentConfig& c) -> double& { return c.position_noise; });
    return r;
  }();
  return reg;
}

const Field* find_field(std::string_view key) {
  for (const auto& [name, field] : registry()) {
    if (name == key) {
      return &field;
    }
  }
  return nullptr;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = trim(view);
    if (view.empty()) {
      continue;
    }
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config: line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(trim(view.substr(0, eq)));
    const std::string_view value = trim(view.substr(eq + 1));
    const Field* field = find_field(key);
    if (field == nullptr) {
      throw ConfigError("config: line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    if (!seen.insert(key).second) {
      throw ConfigError("config: line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    if (value.empty()) {
      throw ConfigError("config: line " + std::to_string(line_no) + ": empty value for '" + key + "'");
    }
    switch (field->kind) {
      case ValueKind::Real:
        field->real(cfg) = parse_real(key, value);
        break;
      case ValueKind::Angle:
        field->real(cfg) = deg_to_rad(parse_real(key, value));
        break;
      default:
        field->set_text(cfg, value);
        break;
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("config: cannot open '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& [name, field] : registry()) {
    keys.push_back(name);
  }
  return keys;
}

std::string dump_config(const ExperimentConfig& cfg) {
  std::string out;
  ExperimentConfig copy = cfg;
  for (const auto& [name, field] : registry()) {
    std::string value;
    switch (field.kind) {
      case ValueKind::Real:
        value = format_real(field.real(copy));
        break;
      case ValueKind::Angle:
        value = format_real(field.real(copy) * 180.0 / std::numbers::pi);
        break;
      default:
        value = field.get_text(cfg);
        break;
    }
    out += name + " = " + value + "\n";
  }
  return out;
}

}  // namespace lwq
