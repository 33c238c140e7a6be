#pragma once

// Counting and Birkhoff-sum checks along the rotation x -> x + omega.

#include <cstdint>
#include <vector>

#include "maryland/arithmetic.hpp"

namespace maryland {

struct AlphaE {
  double E = 0.0;
  double alpha = 0.5;  // sin(pi alpha) = 1/sqrt(E^2+1), cos(pi alpha) = E/sqrt(E^2+1)
};

AlphaE alpha_of_E(double E);

/// #{0 <= k < N : ||x + k omega + alpha - 1/2|| < kappa}, by exhaustive scan.
std::int64_t near_resonance_count(const Frequency& freq, double x, const AlphaE& alpha, std::int64_t N, double kappa);

struct BirkhoffReport {
  std::int64_t N = 0;
  double eta = 0.0;
  double sum = 0.0;          // S_1 = sum_k log(|cos pi(x + k omega + alpha)| + eta)
  double integral = 0.0;     // int_0^1 log(|cos pi t| + eta) dt
  double discrepancy = 0.0;  // |S_1 / N - integral|
  std::vector<std::int64_t> ladder;
  std::vector<double> ladder_discrepancy;
  double delta_hat = 0.0;    // -slope of log discrepancy against log N
};

/// ∫_0^1 log(|cos pi t| + eta) dt by tanh-sinh quadrature (eta >= 0).
double log_cos_integral(double eta);

/// Discrepancy at N plus the ladder N = 2^8 .. 2^16.
BirkhoffReport birkhoff_log_cos(const Frequency& freq, double x, const AlphaE& alpha, std::int64_t N, double eta);

/// I(eta) = ∫_0^1 log(1 + eta / |cos pi x|) dx.
double singular_integral(double eta, double* error_estimate = nullptr);

struct SingularIntegralReport {
  std::vector<double> etas;
  std::vector<double> integrals;
  std::vector<double> ratios;      // I(eta) / sqrt(eta)
  std::vector<double> c_running;   // smallest C with I <= C sqrt(eta) on the ladder so far
  double c_fit = 0.0;
  double c_spread = 0.0;           // max / min of c_running - 1
  double loglog_slope = 0.0;       // slope of log I against log eta
  double max_quad_error = 0.0;
  std::vector<double> lebesgue_eps;
  std::vector<double> lebesgue_measure;  // (2/pi) asin(eps)
  bool lebesgue_ok = false;
  bool bound_ok = false;
  bool stable = false;             // c_spread <= 0.2
};

SingularIntegralReport singular_integral_check(const std::vector<double>& etas = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6});

/// mes[x : |cos pi x| < eps] = (2/pi) asin(eps) for eps in [0, 1].
double cos_sublevel_measure(double eps);

}  // namespace maryland
