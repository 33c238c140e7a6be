#pragma once

// Eigensystems of symmetric windows [-N, N], eigenvector decay, cross-scale
// tracking, and orbit visits to a measured bad set.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "maryland/ldt.hpp"
#include "maryland/model.hpp"

namespace maryland {

class SingularWindowError : public std::domain_error {
 public:
  SingularWindowError(const std::string& what, std::int64_t site) : std::domain_error(what), site(site) {}
  std::int64_t site;
};

struct EigenReport {
  Interval interval;                 // [-N, N]
  double x = 0.0;
  std::vector<double> energies;      // ascending
  Eigen::MatrixXcd vectors;          // unit columns, largest entry real positive
  std::vector<double> decay_rates;   // +inf when no tail entry is usable
  std::vector<std::int64_t> mass_center;
  std::vector<double> tail_floor_fraction;
  std::vector<std::uint8_t> in_cap;  // |E_j| <= C0
  std::vector<double> residuals;     // ||H xi - E xi||_2
  double max_scaled_residual = 0.0;  // max residual / (1 + |E_j|)
};

struct VectorDecay {
  double rate = std::numeric_limits<double>::infinity();
  std::int64_t center = 0;
  double floor_fraction = 0.0;
  int points = 0;
};

/// Regresses log|xi_n| on |n - c| over sites |n| >= inner, c = argmax |xi|
/// (lowest site on ties). `first_site` labels mags[0].
VectorDecay vector_decay_fit(const std::vector<double>& mags, std::int64_t first_site, std::int64_t inner);

/// Throws SingularWindowError if a site is within 1e-8 of a pole.
/// `refine` polishes each eigenvector by inverse iteration on the banded H.
EigenReport eigensystem(const ModelParams& params, double x, int N, bool refine = true);
std::vector<double> window_eigenvalues(const ModelParams& params, double x, int N);

double spectral_distance(const ModelParams& params, double x, int N, double E);

struct ShnolReport {
  bool refused = false;            // E is not within tolerance of a window eigenvalue
  bool ambiguous = false;          // some overlap < 0.9
  std::vector<int> ladder;
  std::vector<double> energies;    // tracked eigenvalue per scale
  std::vector<double> overlaps;    // with the previous scale (1 for the first)
  std::vector<double> weighted_sups;  // sup over |n| <= N_0 of |xi_n| e^{(rho/4)|n|}, xi = 1 at its center
  double sup_ratio = 0.0;          // max / min of weighted_sups
  bool bounded = false;            // finite and sup_ratio <= 10
  bool pass = false;
};

ShnolReport shnol_decay_test(const ModelParams& params, double x, double E, const std::vector<int>& ladder,
                             double tolerance = 1e-6);

struct OrbitHitReport {
  std::int64_t count = 0;
  std::int64_t N1 = 0;
  double exponent = 0.0;  // log count / log N1, 0 when count = 0
  double delta_min = 0.05;
  bool pass = false;      // exponent < 1 - delta_min
};

/// #{1 <= k <= N1 : x0 + k omega mod 1 in S} by scanning every interval.
OrbitHitReport orbit_hit_count(const std::vector<TorusInterval>& bad_set, double x0, double omega, std::int64_t N1);
/// Same count through binary search on the sorted intervals.
OrbitHitReport orbit_hit_count_sorted(const std::vector<TorusInterval>& bad_set, double x0, double omega, std::int64_t N1);

}  // namespace maryland
