#pragma once

#include <ostream>
#include <vector>

#include "lwq/harness.hpp"

namespace lwq {

// All writers emit a header row and print reals with 17 significant digits.

/// t, px, py, pz, prx, pry, prz, vx, vy, vz, qw, qx, qy, qz, qdw, qdx, qdy, qdz,
/// fz, wx, wy, wz, alpha, singular
void write_trace_csv(std::ostream& out, const std::vector<LogRow>& rows);

/// t, prx, pry, prz, vrx, vry, vrz, arx, ary, arz, jrx, jry, jrz,
/// qw, qx, qy, qz, fz, wx, wy, wz, alpha, axw, azw, singular
void write_flat_csv(std::ostream& out, const std::vector<FlatRow>& rows);

/// condition, ok, rmse, peak_error, diverged, divergence_time, divergence_speed, error
void write_compare_csv(std::ostream& out, const std::vector<ConditionCell>& cells);

}  // namespace lwq
