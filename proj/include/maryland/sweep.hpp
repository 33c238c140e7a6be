#pragma once

// Parameter sweeps over (E, N): runs the enabled jobs, writes one CSV per
// diagnostic and an aggregated summary.json.

#include <cstdint>
#include <string>

#include "maryland/config.hpp"

namespace maryland {

/// Uniform double in [0, 1) from a splitmix64 hash of (seed, index).
double counter_uniform(std::uint64_t seed, std::uint64_t index);

/// 17 significant digits, '.' decimal, no locale; inf/-inf/nan spelled out.
std::string format_double(double v);

struct SweepResult {
  int exit_code = 0;  // 0 all assertions passed, 1 otherwise
  std::string summary_path;
};

SweepResult run_sweep(const SweepConfig& config);

}  // namespace maryland
