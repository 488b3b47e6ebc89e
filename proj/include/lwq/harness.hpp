#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lwq/control.hpp"
#include "lwq/dynamics.hpp"
#include "lwq/flatness.hpp"
#include "lwq/trajectories.hpp"

namespace lwq {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  TrajectoryDef trajectory = TrajectoryDef::circle();
  PlantConfig plant;
  AeroParams model;  // the controller's copy of the airframe; may differ from plant.aero
  Gains gains;
  ControllerMode mode;
  ActuatorLimits limits;
  FlatnessOptions flatness;

  double duration = 30.0;       // s
  double control_rate = 250.0;  // Hz
  std::uint64_t seed = 0;
  double abort_radius = 100.0;  // m
  Vec3 initial_offset = Vec3::Zero();
  int delay_ticks = 0;          // position measurement delay, control ticks
  double position_noise = 0.0;  // m, standard deviation of the position measurement

  /// Throws ConfigError on any invalid field.
  void validate() const;
  /// Plant integration substeps per control tick.
  int substeps() const;
};

struct LogRow {
  double t = 0.0;
  Vec3 p = Vec3::Zero();
  Vec3 p_ref = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  Vec3 v_ref = Vec3::Zero();
  UnitQuaternion q = UnitQuaternion::Identity();
  UnitQuaternion q_d = UnitQuaternion::Identity();
  double thrust = 0.0;
  Vec3 body_rate = Vec3::Zero();
  double alpha = 0.0;
  SingularCase singular = SingularCase::None;
};

struct RunResult {
  std::vector<LogRow> rows;
  double rmse = 0.0;        // m
  double peak_error = 0.0;  // m
  bool diverged = false;
  double divergence_time = 0.0;
};

class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, RunResult partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const RunResult& partial() const { return partial_; }

 private:
  RunResult partial_;
};

class EmptySeries : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// sqrt(1/N sum |p_ref(k) - p(k)|^2). Throws EmptySeries for N == 0 and
/// std::invalid_argument when the lengths differ.
double rmse(std::span<const Vec3> reference, std::span<const Vec3> actual);
double rmse(const std::vector<LogRow>& rows);

/// Closed-loop run. Stops early (diverged = true) when the tracking error
/// exceeds the abort radius; never throws on divergence.
RunResult simulate(const ExperimentConfig& cfg);

/// As simulate(), but throws DivergenceError on divergence.
RunResult run_experiment(const ExperimentConfig& cfg);

struct ConditionCell {
  std::string name;
  ControllerMode mode;
  bool ok = false;
  std::string error;
  double rmse = 0.0;
  double peak_error = 0.0;
  bool diverged = false;
  double divergence_time = 0.0;
  double divergence_speed = 0.0;  // reference speed at divergence, m/s
  RunResult result;
};

/// Runs pid-dfaf, pd-dfaf, pid-df, pd-df and a no-rate-feedforward ablation
/// of the base mode, with identical plant and seed. Output order is fixed.
std::vector<ConditionCell> condition_matrix(const ExperimentConfig& base, bool parallel = true);

struct FlatRow {
  double t = 0.0;
  FlatSample sample;
  FlatnessOutput output;
};

/// Feedforward along the configured trajectory at the control rate, using
/// the controller's model and mode.
std::vector<FlatRow> flat_trace(const ExperimentConfig& cfg);

struct FeasibilityReport {
  double max_thrust = 0.0;      // N, largest |f_z|
  double thrust_limit = 0.0;    // N
  double max_rate = 0.0;        // rad/s, largest |w| component
  double rate_limit = 0.0;      // rad/s
  int thrust_violations = 0;
  int rate_violations = 0;
  int singular_samples = 0;
  int samples = 0;
  bool feasible() const { return thrust_violations == 0 && rate_violations == 0; }
};

FeasibilityReport check_feasibility(const ExperimentConfig& cfg);

}  // namespace lwq
