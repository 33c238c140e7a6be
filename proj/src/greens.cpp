#include "maryland/greens.hpp"

#include <cmath>
#include <sstream>

namespace maryland {

namespace {

template <class T>
Eigen::MatrixXcd solve_columns(const BandLU<T>& lu, const std::vector<double>& cos_diag) {
  const int n = lu.size();
  Eigen::MatrixXcd g(n, n);
  std::vector<T> col(n);
  for (int j = 0; j < n; ++j) {
    std::fill(col.begin(), col.end(), T{});
    col[j] = cos_diag[j];
    lu.solve_in_place(col);
    for (int i = 0; i < n; ++i) g(i, j) = col[i];
  }
  return g;
}

[[noreturn]] void throw_resonance(const LogDet& diag, Interval interval) {
  std::ostringstream os;
  os << "B is rank deficient on [" << interval.first << ", " << interval.last << "]";
  throw ResonanceError(os.str(), diag);
}

template <class T>
Eigen::MatrixXcd greens_values_impl(const ModelParams& params, double x, Interval interval) {
  BandLU<T> lu;
  fill_b_band<T>(params, x, interval, lu);
  lu.factor();
  if (lu.singular()) throw_resonance(lu.log_det(), interval);
  const int n = interval.size();
  std::vector<double> cos_diag(n);
  for (int i = 0; i < n; ++i) cos_diag[i] = trig_pi(orbit_phase(x, interval.first + i, params.freq.omega)).cos;
  return solve_columns(lu, cos_diag);
}

}  // namespace

GreensMatrix greens_function(const OperatorWindow& window) {
  const int n = window.size();
  const int band = std::min(window.params->symbol.radius(), n - 1);
  BandLU<cplx> lu(n, band, band);
  for (int i = 0; i < n; ++i)
    for (int j = std::max(0, i - band); j <= std::min(n - 1, i + band); ++j) lu(i, j) = window.b_matrix(i, j);
  lu.factor();
  if (lu.singular()) throw_resonance(log_abs_det(window.b_matrix), window.interval);

  std::vector<double> cos_diag(window.cos_diag.data(), window.cos_diag.data() + n);
  GreensMatrix g;
  g.interval = window.interval;
  g.values = solve_columns(lu, cos_diag);
  g.via = GreensVia::factorized;
  if (!window.singular_flag) {
    const Eigen::MatrixXcd r = window.h_minus_e * g.values - Eigen::MatrixXcd::Identity(n, n);
    g.residual = r.cwiseAbs().maxCoeff();
  }
  return g;
}

Eigen::MatrixXcd greens_values(const ModelParams& params, double x, Interval interval) {
  if (params.symbol.is_real()) return greens_values_impl<double>(params, x, interval);
  return greens_values_impl<cplx>(params, x, interval);
}

double cramer_oracle(const OperatorWindow& window, int n, int n_prime) {
  const int size = window.size();
  if (size > 12) throw OracleScopeError("cramer_oracle: window side > 12 refused");
  if (n < 0 || n >= size || n_prime < 0 || n_prime >= size) throw std::out_of_range("cramer_oracle: index");
  const double det = std::abs(cofactor_det(window.b_matrix));
  if (det == 0.0) throw ResonanceError("cramer_oracle: det B = 0", log_abs_det(window.b_matrix));
  const double minor = size == 1 ? 1.0 : std::abs(cofactor_det(minor_matrix(window.b_matrix, n_prime, n)));
  return std::abs(window.cos_diag(n_prime)) * minor / det;
}

DecayEstimate predicted_decay(const ModelParams& params, int N) {
  DecayEstimate d;
  d.predicted_rate = params.c0();
  d.predicted_offset = params.c0() * std::pow(params.eps0, 1.0 / 40.0) * N;
  return d;
}

DecayEstimate decay_fit(const Eigen::MatrixXcd& g, const DecayEstimate& seed) {
  const int n = static_cast<int>(g.rows());
  DecayEstimate out = seed;
  out.distance_profile.assign(n, std::numeric_limits<double>::quiet_NaN());
  out.distance_counts.assign(n, 0);
  std::vector<double> sums(n, 0.0);
  int below = 0, total = 0;
  const int d_lo = n / 4;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int d = std::abs(i - j);
      const double a = std::abs(g(i, j));
      const bool usable = a > kMagnitudeFloor;
      if (d >= d_lo) {
        ++total;
        if (!usable) ++below;
      }
      if (usable) {
        sums[d] += std::log(a);
        ++out.distance_counts[d];
      }
    }
  }
  int usable_entries = 0;
  std::vector<double> xs, ys;
  for (int d = 0; d < n; ++d) {
    if (out.distance_counts[d] == 0) continue;
    out.distance_profile[d] = sums[d] / out.distance_counts[d];
    if (d >= d_lo) {
      usable_entries += out.distance_counts[d];
      xs.push_back(d);
      ys.push_back(out.distance_profile[d]);
    }
  }
  out.floor_fraction = total > 0 ? static_cast<double>(below) / total : 0.0;
  if (usable_entries < 10 || xs.size() < 2) throw DegenerateFit("decay_fit: too few entries above the floor");

  const double k = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  out.rate = -slope;
  out.offset = my - slope * mx;
  out.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  out.points = static_cast<int>(xs.size());
  return out;
}

DecayEstimate decay_fit(const GreensMatrix& g, const DecayEstimate& seed) { return decay_fit(g.values, seed); }

std::vector<int> shift_order(int max_abs) {
  std::vector<int> out{0};
  for (int m = 1; m <= max_abs; ++m) {
    out.push_back(m);
    out.push_back(-m);
  }
  return out;
}

int max_shift_below_sqrt(int N) {
  int m = 0;
  while (static_cast<long long>(m + 1) * (m + 1) < N) ++m;
  return m;
}

ShiftSearch find_good_shift(const ModelParams& params, double x, int N, double rate_floor, double r2_floor) {
  if (N < 16) throw std::invalid_argument("find_good_shift: N must be >= 16");
  ShiftSearch out;
  out.sup_bound = std::exp(params.c0() * std::pow(params.eps0, 1.0 / 40.0) * N);
  const DecayEstimate seed = predicted_decay(params, N);
  for (int m : shift_order(max_shift_below_sqrt(N))) {
    ShiftAttempt a;
    a.m = m;
    Eigen::MatrixXcd g;
    try {
      g = greens_values(params, x, Interval{m, m + N - 1});
    } catch (const ResonanceError&) {
      a.resonant = true;
      out.attempts.push_back(a);
      continue;
    }
    a.sup = g.cwiseAbs().maxCoeff();
    DecayEstimate est = seed;
    const Eigen::MatrixXcd off = g - Eigen::MatrixXcd(g.diagonal().asDiagonal());
    if (off.cwiseAbs().maxCoeff() == 0.0) {
      a.rate = std::numeric_limits<double>::infinity();
      a.r2 = 1.0;
      est.rate = a.rate;
      est.r2 = 1.0;
    } else {
      try {
        est = decay_fit(g, seed);
        a.rate = est.rate;
        a.r2 = est.r2;
      } catch (const DegenerateFit&) {
        a.rate = std::numeric_limits<double>::quiet_NaN();
      }
    }
    a.accepted = a.rate >= rate_floor && a.r2 >= r2_floor && a.sup <= out.sup_bound;
    out.attempts.push_back(a);
    if (a.accepted) {
      out.m = m;
      out.estimate = est;
      break;
    }
  }
  return out;
}

MinorBoundReport minor_bound_spotcheck(const OperatorWindow& window, int n, int n_prime) {
  const int size = window.size();
  if (size > 12) throw OracleScopeError("minor_bound_spotcheck: window side > 12 refused");
  if (n < 0 || n >= size || n_prime < 0 || n_prime >= size) throw std::out_of_range("minor_bound_spotcheck: index");
  const ModelParams& p = *window.params;
  const double N = size;
  const double d = std::abs(n - n_prime);
  const double rho = p.symbol.rho();
  const double eps0 = p.eps0;

  MinorBoundReport r;
  r.minor_abs = size == 1 ? 1.0 : std::abs(cofactor_det(minor_matrix(window.b_matrix, n, n_prime)));
  const double log_pre = 0.5 * N * std::log(p.E * p.E + 1.0) - N * std::log(2.0) + std::pow(eps0, 0.45) * N;
  const double a = 2.0 * std::pow(eps0, 1.0 / 20.0) * N - rho * d;
  const double b = -0.5 * rho * d;
  const double hi = std::max(a, b);
  const double log_rhs = log_pre + hi + std::log(std::exp(a - hi) + std::exp(b - hi));
  r.rhs = std::exp(log_rhs);
  r.slack = r.rhs - r.minor_abs;
  r.log_slack = r.minor_abs == 0.0 ? std::numeric_limits<double>::infinity() : log_rhs - std::log(r.minor_abs);
  r.holds = r.log_slack > 0.0;
  return r;
}

}  // namespace maryland
