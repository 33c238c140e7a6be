#include "maryland/ergodic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/quadrature/tanh_sinh.hpp>

namespace maryland {

AlphaE alpha_of_E(double E) {
  if (!std::isfinite(E)) throw std::domain_error("alpha_of_E: E must be finite");
  return {E, std::atan2(1.0, E) / kPi};
}

std::int64_t near_resonance_count(const Frequency& freq, double x, const AlphaE& alpha, std::int64_t N, double kappa) {
  if (!(kappa >= 0.0 && kappa <= 0.5)) throw std::invalid_argument("near_resonance_count: kappa must lie in [0, 1/2]");
  if (N < 1) throw std::invalid_argument("near_resonance_count: N must be >= 1");
  if (kappa == 0.5) return N;
  const double base = x + alpha.alpha - 0.5;
  std::int64_t count = 0;
  for (std::int64_t k = 0; k < N; ++k)
    if (torus_norm(orbit_phase(base, k, freq.omega)) < kappa) ++count;
  return count;
}

double log_cos_integral(double eta) {
  if (!(eta >= 0.0)) throw std::invalid_argument("log_cos_integral: eta must be >= 0");
  // Symmetric about 1/2; with t = 1/2 - s the integrand is log(sin pi s + eta).
  boost::math::quadrature::tanh_sinh<double> q;
  auto f = [eta](double s) { return std::log(trig_pi(s).sin + eta); };
  return 2.0 * q.integrate(f, 0.0, 0.5, 1e-13);
}

namespace {

double orbit_log_cos_sum(const Frequency& freq, double x, double alpha, std::int64_t N, double eta) {
  double acc = 0.0;
  for (std::int64_t k = 0; k < N; ++k) acc += std::log(std::abs(trig_pi(orbit_phase(x + alpha, k, freq.omega)).cos) + eta);
  return acc;
}

}  // namespace

BirkhoffReport birkhoff_log_cos(const Frequency& freq, double x, const AlphaE& alpha, std::int64_t N, double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("birkhoff_log_cos: eta must be positive");
  if (N < 1) throw std::invalid_argument("birkhoff_log_cos: N must be >= 1");
  BirkhoffReport r;
  r.N = N;
  r.eta = eta;
  r.integral = log_cos_integral(eta);
  r.sum = orbit_log_cos_sum(freq, x, alpha.alpha, N, eta);
  r.discrepancy = std::abs(r.sum / N - r.integral);

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int p = 8; p <= 16; ++p) {
    const std::int64_t n = std::int64_t{1} << p;
    const double d = std::abs(orbit_log_cos_sum(freq, x, alpha.alpha, n, eta) / n - r.integral);
    r.ladder.push_back(n);
    r.ladder_discrepancy.push_back(d);
    const double lx = std::log(static_cast<double>(n));
    const double ly = std::log(std::max(d, 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double k = static_cast<double>(r.ladder.size());
  r.delta_hat = -(k * sxy - sx * sy) / (k * sxx - sx * sx);
  return r;
}

double singular_integral(double eta, double* error_estimate) {
  if (!(eta >= 0.0 && eta < 1.0)) throw std::invalid_argument("singular_integral: eta must lie in [0, 1)");
  if (error_estimate) *error_estimate = 0.0;
  if (eta == 0.0) return 0.0;
  // By symmetry 2 ∫_0^{1/2} log(1 + eta / sin pi s) ds; split where sin pi s ~ eta.
  boost::math::quadrature::tanh_sinh<double> q;
  auto f = [eta](double s) {
    const double sn = trig_pi(s).sin;
    return std::log1p(eta / sn);
  };
  const double cut = std::min(eta, 0.25);
  double e1 = 0.0, e2 = 0.0;
  const double a = q.integrate(f, 0.0, cut, 1e-12, &e1);
  const double b = q.integrate(f, cut, 0.5, 1e-12, &e2);
  if (error_estimate) *error_estimate = 2.0 * (e1 * std::abs(a) + e2 * std::abs(b));
  return 2.0 * (a + b);
}

double cos_sublevel_measure(double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("cos_sublevel_measure: eps must lie in [0, 1]");
  return 2.0 / kPi * std::asin(eps);
}

SingularIntegralReport singular_integral_check(const std::vector<double>& etas) {
  SingularIntegralReport r;
  r.etas = etas;
  double running = 0.0;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (double eta : etas) {
    double err = 0.0;
    const double I = singular_integral(eta, &err);
    r.max_quad_error = std::max(r.max_quad_error, err);
    r.integrals.push_back(I);
    const double ratio = I / std::sqrt(eta);
    r.ratios.push_back(ratio);
    running = std::max(running, ratio);
    r.c_running.push_back(running);
    sx += std::log(eta);
    sy += std::log(I);
    sxx += std::log(eta) * std::log(eta);
    sxy += std::log(eta) * std::log(I);
  }
  const double k = static_cast<double>(etas.size());
  r.loglog_slope = k > 1 ? (k * sxy - sx * sy) / (k * sxx - sx * sx) : 0.0;
  r.c_fit = running;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (double c : r.c_running) {
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  r.c_spread = etas.empty() ? 0.0 : hi / lo - 1.0;
  r.stable = r.c_spread <= 0.2;
  r.bound_ok = true;
  for (std::size_t i = 0; i < etas.size(); ++i)
    if (!(r.integrals[i] <= r.c_fit * std::sqrt(etas[i]))) r.bound_ok = false;

  r.lebesgue_ok = true;
  for (double eps : {1e-8, 1e-6, 1e-4, 1e-3, 1e-2, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9, 0.99}) {
    const double m = cos_sublevel_measure(eps);
    r.lebesgue_eps.push_back(eps);
    r.lebesgue_measure.push_back(m);
    if (!(m < eps)) r.lebesgue_ok = false;
  }
  return r;
}

}  // namespace maryland
