// Command-line front end: flat | sim | compare | check.
// Exit codes: 0 success, 1 infeasible (check only), 2 configuration error, 3 divergence.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lwq/config.hpp"
#include "lwq/csv.hpp"
#include "lwq/harness.hpp"

namespace {

constexpr int kExitInfeasible = 1;
constexpr int kExitConfig = 2;
constexpr int kExitDivergence = 3;

struct CommonOptions {
  std::string config;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<double> duration;
  std::string condition;
};

lwq::ExperimentConfig resolve(const CommonOptions& opts) {
  lwq::ExperimentConfig cfg = opts.config.empty() ? lwq::ExperimentConfig{} : lwq::load_config(opts.config);
  if (opts.seed) cfg.seed = *opts.seed;
  if (opts.duration) cfg.duration = *opts.duration;
  if (!opts.condition.empty()) {
    const auto c = lwq::parse_condition(opts.condition);
    if (!c) {
      throw lwq::ConfigError("unknown condition '" + opts.condition + "'");
    }
    const bool legacy = cfg.mode.legacy_thrust_normalization;
    const bool rate_ff = cfg.mode.use_rate_feedforward;
    cfg.mode = lwq::mode_for(*c);
    cfg.mode.legacy_thrust_normalization = legacy;
    cfg.mode.use_rate_feedforward = rate_ff;
  }
  cfg.validate();
  return cfg;
}

std::ofstream open_output(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  const auto path = std::filesystem::path(dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write '" + path.string() + "'");
  }
  return out;
}

void add_common(CLI::App* cmd, CommonOptions& opts, bool with_condition) {
  cmd->add_option("--config", opts.config, "Configuration file (key = value)");
  cmd->add_option("--out", opts.out_dir, "Output directory");
  cmd->add_option("--seed", opts.seed, "Random seed override");
  cmd->add_option("--duration", opts.duration, "Duration override, s");
  if (with_condition) {
    cmd->add_option("--condition", opts.condition, "pid-dfaf | pd-dfaf | pid-df | pd-df")
        ->check(CLI::IsMember({"pid-dfaf", "pd-dfaf", "pid-df", "pd-df"}));
  }
}

int run_flat(const CommonOptions& opts) {
  const auto cfg = resolve(opts);
  auto out = open_output(opts.out_dir, "flat.csv");
  lwq::write_flat_csv(out, lwq::flat_trace(cfg));
  return 0;
}

int run_sim(const CommonOptions& opts) {
  const auto cfg = resolve(opts);
  const lwq::RunResult result = lwq::simulate(cfg);
  auto out = open_output(opts.out_dir, "trace.csv");
  lwq::write_trace_csv(out, result.rows);
  std::printf("rmse %.6f m  peak %.6f m  samples %zu\n", result.rmse, result.peak_error, result.rows.size());
  if (result.diverged) {
    std::fprintf(stderr, "diverged at t = %.3f s\n", result.divergence_time);
    return kExitDivergence;
  }
  return 0;
}

int run_compare(const CommonOptions& opts) {
  const auto cfg = resolve(opts);
  const auto cells = lwq::condition_matrix(cfg);
  auto out = open_output(opts.out_dir, "compare.csv");
  lwq::write_compare_csv(out, cells);
  std::printf("%-12s %12s %12s %s\n", "condition", "rmse [m]", "peak [m]", "status");
  for (const auto& c : cells) {
    const char* status = !c.ok ? "error" : (c.diverged ? "diverged" : "ok");
    std::printf("%-12s %12.6f %12.6f %s", c.name.c_str(), c.rmse, c.peak_error, status);
    if (c.diverged) std::printf(" (t=%.2f s, v_ref=%.2f m/s)", c.divergence_time, c.divergence_speed);
    if (!c.ok) std::printf(" %s", c.error.c_str());
    std::printf("\n");
  }
  return 0;
}

int run_check(const CommonOptions& opts) {
  const auto cfg = resolve(opts);
  const auto report = lwq::check_feasibility(cfg);
  std::printf("samples %d  singular %d\n", report.samples, report.singular_samples);
  std::printf("thrust  max %.4f N  limit %.4f N  violations %d\n", report.max_thrust, report.thrust_limit,
              report.thrust_violations);
  std::printf("rate    max %.4f rad/s  limit %.4f rad/s  violations %d\n", report.max_rate, report.rate_limit,
              report.rate_violations);
  std::printf("%s\n", report.feasible() ? "feasible" : "infeasible");
  return report.feasible() ? 0 : kExitInfeasible;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lifting-wing quadcopter flatness feedforward and tracking simulator"};
  app.require_subcommand(1);

  CommonOptions flat_opts, sim_opts, compare_opts, check_opts;
  add_common(app.add_subcommand("flat", "Trajectory -> feedforward CSV (no simulation)"), flat_opts, true);
  add_common(app.add_subcommand("sim", "One closed-loop run -> trace CSV"), sim_opts, true);
  add_common(app.add_subcommand("compare", "Condition matrix -> summary table"), compare_opts, false);
  add_common(app.add_subcommand("check", "Feedforward vs actuator limits"), check_opts, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (app.got_subcommand("flat")) return run_flat(flat_opts);
    if (app.got_subcommand("sim")) return run_sim(sim_opts);
    if (app.got_subcommand("compare")) return run_compare(compare_opts);
    if (app.got_subcommand("check")) return run_check(check_opts);
  } catch (const lwq::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const lwq::DivergenceError& e) {
    std::fprintf(stderr, "divergence: %s\n", e.what());
    return kExitDivergence;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
  return 0;
}
