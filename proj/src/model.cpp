#include "maryland/model.hpp"

#include <algorithm>
#include <sstream>

namespace maryland {

namespace {

void check_decay(double rho, int n, cplx value) {
  const double bound = std::exp(-rho * std::abs(n));
  if (!(std::abs(value) < bound)) {
    std::ostringstream os;
    os << "symbol coefficient at n=" << n << " has |phi_hat(n)|=" << std::abs(value)
       << " >= exp(-rho|n|)=" << bound;
    throw SymbolError(os.str());
  }
}

}  // namespace

int LongRangeSymbol::truncation_radius(double rho) {
  if (!(rho > 0.0)) throw SymbolError("rho must be positive");
  return static_cast<int>(std::floor(16.0 * std::log(10.0) / rho)) + 1;
}

LongRangeSymbol::LongRangeSymbol(double rho, int radius, std::vector<cplx> coeffs, std::string description)
    : rho_(rho), radius_(radius), coeffs_(std::move(coeffs)), description_(std::move(description)) {
  l1_ = 0.0;
  real_ = true;
  for (int n = -radius_; n <= radius_; ++n) {
    const cplx v = (*this)(n);
    check_decay(rho_, n, v);
    if (std::abs(v - std::conj((*this)(-n))) > 1e-14) {
      std::ostringstream os;
      os << "symbol is not Hermitian at n=" << n;
      throw SymbolError(os.str());
    }
    if (v.imag() != 0.0) real_ = false;
    l1_ += std::abs(v);
  }
}

LongRangeSymbol LongRangeSymbol::exp_decay(double rho, double rate, double margin) {
  const int r = truncation_radius(rho);
  std::vector<cplx> c(2 * r + 1);
  for (int n = -r; n <= r; ++n) c[n + r] = margin * std::exp(-rate * std::abs(n));
  std::ostringstream os;
  os << "exp_decay(rate=" << rate << ", margin=" << margin << ")";
  return LongRangeSymbol(rho, r, std::move(c), os.str());
}

LongRangeSymbol LongRangeSymbol::nearest_neighbor(double rho, double scale) {
  if (!(rho > 0.0)) throw SymbolError("rho must be positive");
  if (scale < 0.0) scale = 0.99 * std::exp(-rho);
  std::vector<cplx> c{scale, 0.0, scale};
  std::ostringstream os;
  os << "nearest_neighbor(scale=" << scale << ")";
  return LongRangeSymbol(rho, 1, std::move(c), os.str());
}

LongRangeSymbol LongRangeSymbol::explicit_list(double rho, const std::map<int, cplx>& coeffs) {
  const int cap = truncation_radius(rho);
  int r = 0;
  for (const auto& [n, v] : coeffs) {
    check_decay(rho, n, v);
    if (v != cplx{} && std::abs(n) <= cap) r = std::max(r, std::abs(n));
  }
  std::vector<cplx> c(2 * r + 1);
  for (const auto& [n, v] : coeffs)
    if (std::abs(n) <= r) c[n + r] = v;
  return LongRangeSymbol(rho, r, std::move(c), "explicit");
}

ModelParams ModelParams::make(Frequency freq, LongRangeSymbol symbol, double eps, double E, double C0,
                              double eps0) {
  if (!(eps >= 0.0)) throw std::invalid_argument("eps must be nonnegative");
  if (!(eps * symbol.l1_norm() < 1.0)) throw std::invalid_argument("eps * ||phi_hat||_1 must be < 1");
  if (!(C0 > 0.0)) throw std::invalid_argument("C0 must be positive");
  if (!(std::abs(E) <= C0)) throw std::invalid_argument("|E| must not exceed C0");
  if (eps0 < 0.0) eps0 = std::max(eps, 0.01);
  if (!(eps <= eps0)) throw std::invalid_argument("eps must not exceed eps0");
  ModelParams p;
  p.freq = std::move(freq);
  p.symbol = std::move(symbol);
  p.eps = eps;
  p.E = E;
  p.C0 = C0;
  p.eps0 = eps0;
  return p;
}

ModelParams ModelParams::with_energy(double energy) const {
  return make(freq, symbol, eps, energy, C0, eps0);
}

double singularity_distance(const Frequency& freq, double x, Interval interval) {
  double best = 0.5;
  for (std::int64_t n = interval.first; n <= interval.last; ++n)
    best = std::min(best, torus_norm(orbit_phase(x - 0.5, n, freq.omega)));
  return best;
}

OperatorWindow assemble_window(const ModelParams& params, double x, Interval interval) {
  if (interval.last < interval.first) throw std::invalid_argument("assemble_window: empty interval");
  const int size = interval.size();
  OperatorWindow w;
  w.interval = interval;
  w.x = x;
  w.params = &params;
  w.h_minus_e = Eigen::MatrixXcd::Zero(size, size);
  w.b_matrix = Eigen::MatrixXcd::Zero(size, size);
  w.cos_diag.resize(size);
  w.sin_diag.resize(size);

  const double omega = params.freq.omega;
  const cplx diag_shift = params.eps * params.symbol(0) - params.E;
  double min_dist = 0.5;
  for (int i = 0; i < size; ++i) {
    const std::int64_t n = interval.first + i;
    const PiTrig t = trig_pi(orbit_phase(x, n, omega));
    w.sin_diag(i) = t.sin;
    w.cos_diag(i) = t.cos;
    const double dist = torus_norm(orbit_phase(x - 0.5, n, omega));
    min_dist = std::min(min_dist, dist);
  }
  w.singularity_distance = min_dist;
  w.singular_flag = min_dist < kSingularityTolerance;

  const int radius = params.symbol.radius();
  for (int i = 0; i < size; ++i) {
    const double c = w.cos_diag(i);
    const double s = w.sin_diag(i);
    const double dist = torus_norm(orbit_phase(x - 0.5, interval.first + i, omega));
    w.b_matrix(i, i) = s + diag_shift * c;
    w.h_minus_e(i, i) = dist < kSingularityTolerance ? cplx{std::numeric_limits<double>::infinity(), 0.0}
                                                       : s / c + diag_shift;
    const int lo = std::max(0, i - radius);
    const int hi = std::min(size - 1, i + radius);
    for (int j = lo; j <= hi; ++j) {
      if (j == i) continue;
      const cplx hop = params.eps * params.symbol(i - j);
      w.h_minus_e(i, j) = hop;
      w.b_matrix(i, j) = hop * c;
    }
  }
  return w;
}

namespace {

template <class T>
T as_scalar(cplx v) {
  if constexpr (std::is_same_v<T, double>) {
    return v.real();
  } else {
    return v;
  }
}

template <class T>
void require_scalar_fits(const ModelParams& params) {
  if constexpr (std::is_same_v<T, double>) {
    if (!params.symbol.is_real()) throw std::invalid_argument("real band assembly needs a real symbol");
  }
}

}  // namespace

template <class T>
void fill_b_band(const ModelParams& params, double x, Interval interval, BandLU<T>& out) {
  require_scalar_fits<T>(params);
  const int size = interval.size();
  const int band = std::min(params.symbol.radius(), size - 1);
  out.reset(size, band, band);
  const double omega = params.freq.omega;
  const T diag_shift = as_scalar<T>(params.eps * params.symbol(0) - params.E);
  std::vector<T> hop(2 * band + 1);
  for (int d = -band; d <= band; ++d) hop[d + band] = as_scalar<T>(params.eps * params.symbol(d));
  for (int i = 0; i < size; ++i) {
    const PiTrig t = trig_pi(orbit_phase(x, interval.first + i, omega));
    out(i, i) = t.sin + diag_shift * t.cos;
    const int lo = std::max(0, i - band);
    const int hi = std::min(size - 1, i + band);
    for (int j = lo; j <= hi; ++j)
      if (j != i) out(i, j) = hop[i - j + band] * t.cos;
  }
}

template <class T>
void fill_h_band(const ModelParams& params, double x, Interval interval, double shift, BandLU<T>& out) {
  require_scalar_fits<T>(params);
  const int size = interval.size();
  const int band = std::min(params.symbol.radius(), size - 1);
  out.reset(size, band, band);
  const double omega = params.freq.omega;
  const T diag_shift = as_scalar<T>(params.eps * params.symbol(0) - params.E - shift);
  for (int i = 0; i < size; ++i) {
    const std::int64_t n = interval.first + i;
    if (torus_norm(orbit_phase(x - 0.5, n, omega)) < kSingularityTolerance)
      throw std::domain_error("fill_h_band: singular site " + std::to_string(n));
    const PiTrig t = trig_pi(orbit_phase(x, n, omega));
    out(i, i) = t.sin / t.cos + diag_shift;
    const int lo = std::max(0, i - band);
    const int hi = std::min(size - 1, i + band);
    for (int j = lo; j <= hi; ++j)
      if (j != i) out(i, j) = as_scalar<T>(params.eps * params.symbol(i - j));
  }
}

template void fill_b_band<double>(const ModelParams&, double, Interval, BandLU<double>&);
template void fill_b_band<cplx>(const ModelParams&, double, Interval, BandLU<cplx>&);
template void fill_h_band<double>(const ModelParams&, double, Interval, double, BandLU<double>&);
template void fill_h_band<cplx>(const ModelParams&, double, Interval, double, BandLU<cplx>&);

double binary_entropy(double y) {
  if (y <= 0.0 || y >= 1.0) return 0.0;
  return -(1.0 - y) * std::log1p(-y) - y * std::log(y);
}

EpsilonBudget epsilon_budget(double rho, const LongRangeSymbol& symbol) {
  if (!(rho > 0.0)) throw std::invalid_argument("epsilon_budget: rho must be positive");
  const double l1 = symbol.l1_norm();
  const double log2 = std::log(2.0);
  // g(y) = f(y) + y log 2 increases on (0, 2/3) up to log 3; the search stays
  // on that lower branch, which is the small-eps regime the bounds need.
  auto entropy_term = [&](double y) { return binary_entropy(y) + y * log2; };
  const double y_branch = 2.0 / 3.0;
  const double entropy_free = std::log(3.0) < rho / 2.0;
  auto feasible = [&](double y) {
    const double e = std::pow(y, 20.0);
    if (!(e * l1 < 1.0)) return false;
    if (entropy_free) return true;
    return y < y_branch && rho - entropy_term(y) > rho / 2.0;
  };

  const double y_cap = std::pow(0.5, 1.0 / 20.0);
  EpsilonBudget out;
  double lo = 0.0, hi = y_cap;
  if (feasible(hi)) {
    lo = hi;
    out.binding = "cap";
  } else {
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (feasible(mid) ? lo : hi) = mid;
    }
    const double e_hi = std::pow(hi, 20.0);
    const bool l1_fails = !(e_hi * l1 < 1.0);
    out.binding = l1_fails ? "l1" : "entropy";
  }
  out.eps_hat = std::pow(lo, 20.0);
  out.grid_step = std::pow(hi, 20.0) - out.eps_hat;
  out.l1_slack = 1.0 - out.eps_hat * l1;
  out.entropy_slack = rho - entropy_term(lo) - rho / 2.0;
  out.empty = !(out.eps_hat > 1e-12);
  return out;
}

}  // namespace maryland
