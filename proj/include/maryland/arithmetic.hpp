#pragma once

// Torus arithmetic, continued fractions, and diophantine constants.

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

namespace maryland {

inline constexpr double kPi = 3.14159265358979323846;

/// Distance from x to the nearest integer, in [0, 1/2].
/// Throws std::domain_error for non-finite input.
double torus_norm(double x);

/// Reduce x into [0, 1).
double torus_reduce(double x);

/// sin(pi t) and cos(pi t) for any real t. The argument is reduced by the
/// nearest integer and the parity sign restored, and cos is evaluated as a
/// sine near its zeros so both keep full relative accuracy there.
struct PiTrig {
  double sin;
  double cos;
};
PiTrig trig_pi(double t);

/// Phase x + n*omega, computed directly from n (no running accumulation).
inline double orbit_phase(double x, std::int64_t n, double omega) {
  return std::fma(static_cast<double>(n), omega, x);
}

struct ContinuedFraction {
  std::vector<std::int64_t> quotients;  // a_1, a_2, ... (omega = [0; a_1, a_2, ...])
  bool terminated = false;              // omega is rational at working precision
  bool near_rational = false;           // some partial quotient exceeds 1e12
};

/// Partial quotients of omega in (0, 1) up to the given depth (<= 40).
ContinuedFraction continued_fraction(double omega, int depth);

struct Convergent {
  std::int64_t p;
  std::int64_t q;
};
std::vector<Convergent> convergents(const std::vector<std::int64_t>& quotients);

/// Rotation number with diophantine metadata.
struct Frequency {
  double omega = 0.0;
  double A = 2.0;
  std::optional<double> c;  // if set: ||k omega|| > c |k|^-A for 0 < |k| <= K_checked
  std::int64_t K_checked = 0;
  std::vector<std::int64_t> cf;

  /// Builds a frequency, expanding omega to `cf_depth` partial quotients.
  static Frequency make(double omega, double A, int cf_depth = 20);
  /// (sqrt(5) - 1) / 2.
  static Frequency golden(double A = 2.0);

  /// Computes and stores c = dc_constant(*this, K, A).
  Frequency& certify(std::int64_t K);
};

double golden_mean();

/// min over 1 <= k <= K of ||k omega|| k^A (exhaustive scan). Zero signals
/// that the diophantine condition fails in range.
double dc_constant(const Frequency& freq, std::int64_t K, double A);

}  // namespace maryland
