#pragma once

// The long-range Maryland operator H(x) = tan pi(x + n omega) delta + eps S_phi
// restricted to finite integer intervals, and its cosine regularization
// B = diag(cos pi(x + n omega)) (H - E), which stays bounded at the tan poles.

#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "maryland/arithmetic.hpp"
#include "maryland/linalg.hpp"

namespace maryland {

class SymbolError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Fourier coefficients phi_hat(n) of the hopping symbol, |n| <= radius.
class LongRangeSymbol {
 public:
  LongRangeSymbol() = default;

  /// phi_hat(n) = margin * exp(-rate |n|), truncated at truncation_radius(rho).
  static LongRangeSymbol exp_decay(double rho, double rate, double margin);
  /// phi_hat(+-1) = scale, everything else zero. Default scale 0.99 e^{-rho}.
  static LongRangeSymbol nearest_neighbor(double rho, double scale = -1.0);
  /// Arbitrary coefficients; must be Hermitian and decay strictly faster than e^{-rho|n|}.
  static LongRangeSymbol explicit_list(double rho, const std::map<int, cplx>& coeffs);

  /// Smallest R with e^{-rho R} < 1e-16.
  static int truncation_radius(double rho);

  cplx operator()(int n) const {
    if (n < -radius_ || n > radius_) return {0.0, 0.0};
    return coeffs_[static_cast<std::size_t>(n + radius_)];
  }
  double rho() const { return rho_; }
  double l1_norm() const { return l1_; }
  int radius() const { return radius_; }
  bool is_real() const { return real_; }
  std::string describe() const { return description_; }

 private:
  LongRangeSymbol(double rho, int radius, std::vector<cplx> coeffs, std::string description);

  double rho_ = 1.0;
  int radius_ = 0;
  std::vector<cplx> coeffs_;  // index n + radius
  double l1_ = 0.0;
  bool real_ = true;
  std::string description_;
};

struct ModelParams {
  Frequency freq;
  LongRangeSymbol symbol;
  double eps = 0.0;
  double E = 0.0;
  double C0 = 5.0;
  /// Stand-in for the smallness scale eps_0 that enters the predicted bounds
  /// (offsets eps0^{1/40} N, eps0^{0.45}, eps0^{1/20}). Must satisfy eps <= eps0.
  double eps0 = 0.01;

  /// Validates eps * ||phi_hat||_1 < 1, |E| <= C0, 0 <= eps <= eps0.
  /// A negative eps0 picks max(eps, 0.01).
  static ModelParams make(Frequency freq, LongRangeSymbol symbol, double eps, double E, double C0 = 5.0,
                          double eps0 = -1.0);

  ModelParams with_energy(double energy) const;
  double c0() const { return symbol.rho() / 2.0; }
};

/// Closed integer interval [first, last].
struct Interval {
  std::int64_t first = 0;
  std::int64_t last = 0;
  int size() const { return static_cast<int>(last - first + 1); }
  bool contains(std::int64_t n) const { return n >= first && n <= last; }
  Interval shifted(std::int64_t s) const { return {first + s, last + s}; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

inline constexpr double kSingularityTolerance = 1e-8;

struct OperatorWindow {
  Interval interval;
  double x = 0.0;
  const ModelParams* params = nullptr;
  /// Entries of H(x) - E. Diagonal entries at singular sites hold +inf.
  Eigen::MatrixXcd h_minus_e;
  /// Cosine-regularized matrix, finite everywhere.
  Eigen::MatrixXcd b_matrix;
  Eigen::VectorXd cos_diag;
  Eigen::VectorXd sin_diag;
  bool singular_flag = false;
  double singularity_distance = 0.0;

  int size() const { return interval.size(); }
};

OperatorWindow assemble_window(const ModelParams& params, double x, Interval interval);

/// min over n in the interval of ||x + n omega - 1/2||.
double singularity_distance(const Frequency& freq, double x, Interval interval);

/// Fills a band LU workspace with B over `interval` (no factorization).
/// T = double requires a real symbol.
template <class T>
void fill_b_band(const ModelParams& params, double x, Interval interval, BandLU<T>& out);

/// Fills a band LU workspace with H - E over `interval`. The window must be nonsingular.
template <class T>
void fill_h_band(const ModelParams& params, double x, Interval interval, double shift, BandLU<T>& out);

/// Heuristic stand-in for eps_0(rho): the largest eps_hat <= 1/2 meeting
/// eps_hat ||phi_hat||_1 < 1 and rho - f(eps_hat^{1/20}) - eps_hat^{1/20} log 2 > rho/2,
/// with f(y) = -(1-y)log(1-y) - y log y.
struct EpsilonBudget {
  double eps_hat = 0.0;
  double l1_slack = 0.0;       // 1 - eps_hat * l1
  double entropy_slack = 0.0;  // rho - f - y log 2 - rho/2
  std::string binding;         // "l1", "entropy" or "cap"
  double grid_step = 0.0;      // final bisection bracket width
  bool empty = false;          // eps_hat <= 1e-12
};
EpsilonBudget epsilon_budget(double rho, const LongRangeSymbol& symbol);

/// Binary entropy f(y) = -(1-y)log(1-y) - y log y.
double binary_entropy(double y);

}  // namespace maryland
