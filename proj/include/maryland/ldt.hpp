#pragma once

// The subharmonic function u(x) = (1/N) log(|det B_N(x)| + 10^{-N}), its
// Fejer-weighted Birkhoff averages, and grid measurements of the deviation set.

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "maryland/linalg.hpp"
#include "maryland/model.hpp"

namespace maryland {

using UFunction = std::function<double(double)>;

/// (1/N) log(exp(log_abs) + 10^{-N}) evaluated in log space.
double u_from_log_det(double log_abs, int N);

/// Reusable evaluator for u at fixed (params, N). Keeps a factorization
/// workspace, so one instance per thread.
class UEvaluator {
 public:
  UEvaluator(const ModelParams& params, int N);
  double log_abs_det_b(double x);
  double operator()(double x) { return u_from_log_det(log_abs_det_b(x), n_); }
  int size() const { return n_; }

 private:
  const ModelParams* params_;
  int n_;
  bool real_;
  BandLU<double> real_lu_;
  BandLU<cplx> complex_lu_;
};

double u_function(const ModelParams& params, int N, double x);

/// Weights (M - |m|) / M^2 for m = -(M-1) .. M-1, stored at index m + M - 1.
std::vector<double> fejer_weights(int M);
double fejer_average(const UFunction& u, double x, const Frequency& freq, int M);

/// Midpoint grid (i + 1/2) / G.
std::vector<double> torus_grid(int G);

struct SubharmonicSample {
  std::vector<double> grid;
  std::vector<double> values;
  double bound_B = 1.0;
  int k_max = 0;
  std::vector<cplx> fourier;  // u_hat(k) for k = 0 .. k_max; u_hat(-k) is the conjugate
  /// 1/2 log(1 + E^2) - log 2 + log(1 - eps ||phi_hat||_1) when sampled from a model.
  double mean_lower_bound = std::numeric_limits<double>::quiet_NaN();
};

/// Upper bound of the subharmonic extension on the unit strip,
/// log(||phi_hat||_1 + 1 + C0) + pi, never below log 10 (the floor side).
double subharmonic_bound(const ModelParams& params);
double mean_lower_bound(const ModelParams& params);

/// Fourier coefficients of grid samples for 0 <= k <= k_max (k_max <= G/4).
std::vector<cplx> grid_fourier(const std::vector<double>& values, int k_max);

/// `u` must be safe to call concurrently when threads != 1.
SubharmonicSample sample_function(const UFunction& u, int grid, int k_max, double bound_B, int threads = 1);
SubharmonicSample sample_u(const ModelParams& params, int N, int grid, int k_max, int threads = 0);

struct MeanEstimate {
  double estimate = 0.0;
  double lower_bound = 0.0;
  double slack = 0.0;  // estimate - lower_bound
};
MeanEstimate mean_estimate(const SubharmonicSample& sample);

/// [lo, hi) inside [0, 1]; a run crossing 0 is stored as two pieces.
struct TorusInterval {
  double lo = 0.0;
  double hi = 0.0;
};

struct DeviationProfile {
  int M = 1;
  double sigma = 0.0;
  double threshold = 0.0;
  std::vector<double> grid;
  std::vector<double> u_values;
  std::vector<double> v_values;
  std::vector<std::uint8_t> bad;
  double u_hat0 = 0.0;
  std::int64_t bad_count = 0;
  double bad_fraction = 0.0;
  std::vector<TorusInterval> bad_set;
  double c_tilde_fit = std::numeric_limits<double>::infinity();
};

struct DeviationOptions {
  int M = 0;                  // 0: round(sqrt(N))
  double sigma = 0.0;         // 0: 1 / (50 A)
  std::optional<double> threshold;  // default M^{-sigma}
  int threads = 0;
};

DeviationProfile deviation_measure(const ModelParams& params, int N, int grid, const DeviationOptions& opts = {});
/// Same measurement for an arbitrary thread-safe u (test doubles, closed forms).
DeviationProfile deviation_profile(const UFunction& u, const Frequency& freq, int grid, int M, double sigma,
                                   std::optional<double> threshold, int threads = 1);

/// Maximal runs of flagged grid cells, merged across the wrap point.
std::vector<TorusInterval> bad_set_from_flags(const std::vector<std::uint8_t>& flags);
/// Fraction of grid points with |v - u_hat0| > threshold.
double bad_fraction_at(const DeviationProfile& profile, double threshold);

double fejer_kernel_closed(int M, double theta);
double fejer_kernel_direct(int M, double theta);

struct FejerKernelReport {
  int M = 0;
  std::int64_t k_max = 0;
  double min_kernel = 0.0;
  double max_ratio = 0.0;          // max kernel / bound
  double max_closed_vs_direct = 0.0;
  std::optional<std::int64_t> first_violation;
  bool pass = false;
};

/// Closed-form kernel against 1 / (1 + M^2 ||k omega||^2) for 1 <= k <= k_max,
/// allowing relative slack 1e-12. `direct_check` also sums the weights directly.
FejerKernelReport fejer_kernel_bound_check(const Frequency& freq, int M, std::int64_t k_max, bool direct_check = true);

struct FourierDecayReport {
  double max_k_coeff = 0.0;  // max over 1 <= k <= k_max of k |u_hat(k)|
  int argmax_k = 0;
  double ratio = 0.0;        // max_k_coeff / B
  double constant = 10.0;
  bool pass = false;
};
FourierDecayReport fourier_decay_check(const SubharmonicSample& sample);

struct RefinementReport {
  double scale = 1.0;                // u is divided by this to reach |u| <= 1
  double bound_normalized = 1.0;     // B / scale
  double hypothesis_measure = 0.0;   // mes[|u - u_hat0| > eps0]
  bool hypothesis_ok = false;        // hypothesis_measure < eps1
  double lhs_measure = 0.0;          // mes[|u - u_hat0| > sqrt(eps0)]
  double c_fit = 0.0;
  bool pass = false;
};
RefinementReport measure_refinement_check(const SubharmonicSample& sample, double eps0, double eps1);

}  // namespace maryland
