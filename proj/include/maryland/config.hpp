#pragma once

// Flat `key = value` sweep configuration.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "maryland/model.hpp"

namespace maryland {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key, int line, const std::string& message);
  std::string key;
  int line;
};

struct SweepConfig {
  double omega = 0.0;           // set from omega_token
  std::string omega_token = "golden";
  double A = 2.0;
  double rho = 1.0;
  double eps = 0.01;
  double eps0 = -1.0;           // negative: max(eps, 0.01)
  std::vector<double> E_list{0.0};
  std::vector<int> N_list{64};
  std::string M_rule = "sqrt";  // or a positive integer
  int grid = 1 << 14;
  double C0 = 5.0;
  std::uint64_t seed = 42;
  int threads = 0;              // 0: auto
  std::string out_dir = "out";
  std::vector<std::string> jobs{"greens", "ldt", "dk", "paving", "localize", "orbit"};
  int samples = 200;            // sampled x per Green's function run
  double sigma = 0.0;           // 0: 1 / (50 A)
  std::map<std::string, int> key_lines;  // where each key was set, for error messages

  /// Fejer window for side N.
  int window_for(int N) const;
  LongRangeSymbol symbol() const;
  ModelParams params(double E) const;
};

inline const std::vector<std::string>& known_jobs() {
  static const std::vector<std::string> jobs{"greens", "ldt", "dk", "paving", "localize", "orbit"};
  return jobs;
}

/// Applies one setting; `line` is reported in errors (0 for command-line flags).
void apply_setting(SweepConfig& config, const std::string& key, const std::string& value, int line);
/// Checks cross-key invariants (eps ||phi_hat||_1 < 1, grid size, |E| <= C0).
void validate(SweepConfig& config);
SweepConfig parse_config(const std::string& text);
std::string render_config(const SweepConfig& config);

}  // namespace maryland
