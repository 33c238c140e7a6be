#pragma once

// Green's functions of finite windows through the cosine regularization
// G = B^{-1} diag(cos), plus small-window cofactor oracles and decay fits.

#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "maryland/linalg.hpp"
#include "maryland/model.hpp"

namespace maryland {

enum class GreensVia { factorized, cramer };

struct GreensMatrix {
  Interval interval;
  Eigen::MatrixXcd values;
  GreensVia via = GreensVia::factorized;
  /// sup |(H - E) G - I|; NaN when the window is singular.
  double residual = std::numeric_limits<double>::quiet_NaN();
};

/// B is rank deficient: the energy sits on the window spectrum.
class ResonanceError : public std::runtime_error {
 public:
  ResonanceError(const std::string& what, LogDet diag) : std::runtime_error(what), diagnostics(diag) {}
  LogDet diagnostics;
};

class DegenerateFit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OracleScopeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

GreensMatrix greens_function(const OperatorWindow& window);

/// Same solve straight from the parameters, without dense assembly. Uses a
/// real factorization when the symbol is real. Throws ResonanceError.
Eigen::MatrixXcd greens_values(const ModelParams& params, double x, Interval interval);

/// |G(n, n')| = |cos pi(x + n' omega)| |det B with row n', column n removed| / |det B|,
/// by cofactor expansion. n, n' are 0-based positions in the window; side <= 12.
double cramer_oracle(const OperatorWindow& window, int n, int n_prime);

struct DecayEstimate {
  double rate = 0.0;               // fitted c in |G| ~ e^{offset - c d}
  double offset = 0.0;             // log-scale intercept
  double r2 = 0.0;
  double predicted_rate = 0.0;     // c0 = rho / 2
  double predicted_offset = 0.0;   // c0 eps0^{1/40} N
  double floor_fraction = 0.0;     // share of fitted-range entries below 1e-300
  int points = 0;                  // distances used in the regression
  std::vector<double> distance_profile;  // mean log|G| per distance d (NaN if empty)
  std::vector<int> distance_counts;
};

inline constexpr double kMagnitudeFloor = 1e-300;

/// Seed with the model's predictions: rate rho/2, offset (rho/2) eps0^{1/40} N.
DecayEstimate predicted_decay(const ModelParams& params, int N);

/// Averages log|G| over each anti-diagonal band |n - n'| = d and regresses the
/// averages on d for d in [N/4, N-1]. Throws DegenerateFit when fewer than 10
/// entries are usable or fewer than two distances remain.
DecayEstimate decay_fit(const Eigen::MatrixXcd& g, const DecayEstimate& seed);
DecayEstimate decay_fit(const GreensMatrix& g, const DecayEstimate& seed);

/// Shifts 0, +1, -1, +2, -2, ... with |m| <= max_abs.
std::vector<int> shift_order(int max_abs);
/// Largest |m| with |m| < sqrt(N).
int max_shift_below_sqrt(int N);

struct ShiftAttempt {
  int m = 0;
  double rate = 0.0;   // +inf when every off-diagonal entry vanishes exactly
  double r2 = 0.0;
  double sup = 0.0;
  bool resonant = false;
  bool accepted = false;
};

struct ShiftSearch {
  std::optional<int> m;
  DecayEstimate estimate;   // fit of the accepted shift
  double sup_bound = 0.0;   // e^{c0 eps0^{1/40} N}
  std::vector<ShiftAttempt> attempts;
};

/// Scans |m| < sqrt(N) in shift_order and accepts the first window [m, m+N)
/// whose decay fit has rate >= rate_floor, r2 >= r2_floor and sup |G| <= sup_bound.
ShiftSearch find_good_shift(const ModelParams& params, double x, int N, double rate_floor,
                            double r2_floor = 0.0);

struct MinorBoundReport {
  double minor_abs = 0.0;   // |det B_{n,n'}|
  double rhs = 0.0;
  double slack = 0.0;       // rhs - minor_abs
  double log_slack = 0.0;   // log rhs - log minor_abs (+inf for a zero minor)
  double half_minus_exponent = 0.45;
  bool holds = false;
};

/// Cofactor evaluation of the minor with row n and column n' deleted, against
/// exp(N/2 log(E^2+1) - N log 2 + eps0^{0.45} N) (e^{2 eps0^{1/20} N - rho d} + e^{-rho d / 2}).
MinorBoundReport minor_bound_spotcheck(const OperatorWindow& window, int n, int n_prime);

}  // namespace maryland
