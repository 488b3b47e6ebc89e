#include "lwq/harness.hpp"

#include <cmath>
#include <deque>
#include <random>
#include <thread>

namespace lwq {
namespace {

struct ControlTick {
  FlatSample ref;
  FlatnessOutput ff;
};

ConditionCell run_cell(const ExperimentConfig& base, const std::string& name, const ControllerMode& mode) {
  ConditionCell cell;
  cell.name = name;
  cell.mode = mode;
  try {
    ExperimentConfig cfg = base;
    cfg.mode = mode;
    cell.result = simulate(cfg);
    cell.ok = true;
    cell.rmse = cell.result.rmse;
    cell.peak_error = cell.result.peak_error;
    cell.diverged = cell.result.diverged;
    if (cell.diverged) {
      cell.divergence_time = cell.result.divergence_time;
      cell.divergence_speed = sample(cfg.trajectory, cell.divergence_time).v.norm();
    }
  } catch (const std::exception& e) {
    cell.ok = false;
    cell.error = e.what();
  }
  return cell;
}

}  // namespace

void ExperimentConfig::validate() const {
  try {
    trajectory.validate();
    plant.validate();
    model.validate();
    gains.validate();
    limits.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!(duration > 0.0)) throw ConfigError("sim.duration must be positive");
  if (!(control_rate > 0.0)) throw ConfigError("sim.control_rate must be positive");
  if (!(abort_radius > 0.0)) throw ConfigError("sim.abort_radius must be positive");
  if (delay_ticks < 0) throw ConfigError("sensor.delay_ticks must be >= 0");
  if (!(position_noise >= 0.0)) throw ConfigError("sensor.position_noise must be >= 0");
  if (!initial_offset.allFinite()) throw ConfigError("sim.initial_offset must be finite");
  if (!(flatness.zero_velocity_exit >= flatness.zero_velocity_enter)) {
    throw ConfigError("flatness.zero_velocity_exit must be >= flatness.zero_velocity_enter");
  }
  const double ratio = 1.0 / (control_rate * plant.step);
  if (ratio < 1.0 - 1e-9 || std::abs(ratio - std::round(ratio)) > 1e-6) {
    throw ConfigError("plant.step must divide the control period");
  }
}

int ExperimentConfig::substeps() const {
  return static_cast<int>(std::lround(1.0 / (control_rate * plant.step)));
}

double rmse(std::span<const Vec3> reference, std::span<const Vec3> actual) {
  if (reference.size() != actual.size()) {
    throw std::invalid_argument("rmse: series lengths differ");
  }
  if (reference.empty()) {
    throw EmptySeries("rmse: empty series");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < reference.size(); ++k) {
    sum += (reference[k] - actual[k]).squaredNorm();
  }
  return std::sqrt(sum / static_cast<double>(reference.size()));
}

double rmse(const std::vector<LogRow>& rows) {
  std::vector<Vec3> ref, act;
  ref.reserve(rows.size());
  act.reserve(rows.size());
  for (const LogRow& row : rows) {
    ref.push_back(row.p_ref);
    act.push_back(row.p);
  }
  return rmse(ref, act);
}

RunResult simulate(const ExperimentConfig& cfg) {
  cfg.validate();

  const double dt = 1.0 / cfg.control_rate;
  const auto ticks = static_cast<long>(std::llround(cfg.duration * cfg.control_rate));
  const int substeps = cfg.substeps();
  const AeroParams ff_model = feedforward_model(cfg.model, cfg.mode);

  PlantConfig plant = cfg.plant;
  plant.step = dt / substeps;

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> noise(0.0, 1.0);

  FlatnessContext flat_ctx;
  ControllerContext ctrl_ctx;

  // Start on the reference: flatness state at t = 0 plus the configured offset.
  const FlatSample ref0 = sample(cfg.trajectory, 0.0);
  FlatnessContext init_ctx;
  const FlatnessOutput ff0 = flatness_transform(ff_model, ref0, init_ctx, Vec3::Zero(), cfg.flatness);
  VehicleState state;
  state.p = ref0.p + cfg.initial_offset;
  state.v = ref0.v;
  state.attitude = ff0.attitude;
  state.t = 0.0;

  ControlInput applied{ff0.thrust, ff0.body_rate};
  std::deque<Vec3> position_history;

  RunResult result;
  result.rows.reserve(static_cast<std::size_t>(ticks) + 1);

  for (long k = 0; k <= ticks; ++k) {
    const double t = static_cast<double>(k) * dt;
    state.t = t;

    ControlTick tick;
    tick.ref = sample(cfg.trajectory, t);
    tick.ff = flatness_transform(ff_model, tick.ref, flat_ctx, Vec3::Zero(), cfg.flatness);

    position_history.push_back(state.p);
    if (static_cast<int>(position_history.size()) > cfg.delay_ticks + 1) {
      position_history.pop_front();
    }
    VehicleState measured = state;
    measured.p = position_history.front();
    if (cfg.position_noise > 0.0) {
      measured.p += cfg.position_noise * Vec3(noise(rng), noise(rng), noise(rng));
    }

    const ControllerOutput cmd = controller_step(cfg.model, cfg.gains, cfg.mode, cfg.limits, tick.ref,
                                                 tick.ff, measured, ctrl_ctx, dt);

    LogRow row;
    row.t = t;
    row.p = state.p;
    row.p_ref = tick.ref.p;
    row.v = state.v;
    row.v_ref = tick.ref.v;
    row.q = mat_to_quat(state.attitude);
    row.q_d = mat_to_quat(cmd.desired_attitude);
    row.thrust = cmd.input.thrust;
    row.body_rate = cmd.input.body_rate;
    row.alpha = angle_of_attack(plant.aero, state.attitude, state.v - plant.wind);
    row.singular = tick.ff.singular_case;
    result.rows.push_back(row);

    const double error = (state.p - tick.ref.p).norm();
    result.peak_error = std::max(result.peak_error, error);
    if (!(error <= cfg.abort_radius) || !state.p.allFinite()) {
      result.diverged = true;
      result.divergence_time = t;
      break;
    }
    if (k == ticks) {
      break;
    }

    applied = actuator_lag(plant, cmd.input, applied, dt);
    for (int s = 0; s < substeps; ++s) {
      state = rk4_step(plant, state, applied);
    }
  }

  result.rmse = rmse(result.rows);
  return result;
}

RunResult run_experiment(const ExperimentConfig& cfg) {
  RunResult result = simulate(cfg);
  if (result.diverged) {
    const std::string what = "tracking error exceeded " + std::to_string(cfg.abort_radius) +
                             " m at t = " + std::to_string(result.divergence_time) + " s";
    throw DivergenceError(what, std::move(result));
  }
  return result;
}

std::vector<ConditionCell> condition_matrix(const ExperimentConfig& base, bool parallel) {
  std::vector<std::pair<std::string, ControllerMode>> specs;
  for (Condition c : {Condition::PidDfaf, Condition::PdDfaf, Condition::PidDf, Condition::PdDf}) {
    ControllerMode mode = mode_for(c);
    mode.legacy_thrust_normalization = base.mode.legacy_thrust_normalization;
    specs.emplace_back(to_string(c), mode);
  }
  ControllerMode ablation = base.mode;
  ablation.use_rate_feedforward = false;
  specs.emplace_back("no-rate-ff", ablation);

  std::vector<ConditionCell> cells(specs.size());
  if (parallel) {
    std::vector<std::thread> workers;
    workers.reserve(specs.size());
    for (std::size_t i = 0; i < specs.size(); ++i) {
      workers.emplace_back([&, i] { cells[i] = run_cell(base, specs[i].first, specs[i].second); });
    }
    for (auto& w : workers) {
      w.join();
    }
  } else {
    for (std::size_t i = 0; i < specs.size(); ++i) {
      cells[i] = run_cell(base, specs[i].first, specs[i].second);
    }
  }
  return cells;
}

std::vector<FlatRow> flat_trace(const ExperimentConfig& cfg) {
  cfg.validate();
  const AeroParams model = feedforward_model(cfg.model, cfg.mode);
  const double dt = 1.0 / cfg.control_rate;
  const auto ticks = static_cast<long>(std::llround(cfg.duration * cfg.control_rate));

  FlatnessContext ctx;
  std::vector<FlatRow> rows;
  rows.reserve(static_cast<std::size_t>(ticks) + 1);
  for (long k = 0; k <= ticks; ++k) {
    FlatRow row;
    row.t = static_cast<double>(k) * dt;
    row.sample = sample(cfg.trajectory, row.t);
    row.output = flatness_transform(model, row.sample, ctx, Vec3::Zero(), cfg.flatness);
    rows.push_back(row);
  }
  return rows;
}

FeasibilityReport check_feasibility(const ExperimentConfig& cfg) {
  FeasibilityReport report;
  report.thrust_limit = cfg.limits.thrust_to_weight * cfg.model.mass * kGravity;
  report.rate_limit = cfg.limits.max_rate;
  for (const FlatRow& row : flat_trace(cfg)) {
    const double thrust = std::abs(row.output.thrust);
    const double rate = row.output.body_rate.cwiseAbs().maxCoeff();
    report.max_thrust = std::max(report.max_thrust, thrust);
    report.max_rate = std::max(report.max_rate, rate);
    report.thrust_violations += thrust > report.thrust_limit ? 1 : 0;
    report.rate_violations += rate > report.rate_limit ? 1 : 0;
    report.singular_samples += row.output.singular_case != SingularCase::None ? 1 : 0;
    ++report.samples;
  }
  return report;
}

}  // namespace lwq
