#include "maryland/arithmetic.hpp"

#include <limits>
#include <stdexcept>

namespace maryland {

double torus_norm(double x) {
  if (!std::isfinite(x)) throw std::domain_error("torus_norm: non-finite input");
  return std::abs(x - std::round(x));
}

double torus_reduce(double x) {
  if (!std::isfinite(x)) throw std::domain_error("torus_reduce: non-finite input");
  double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

PiTrig trig_pi(double t) {
  const double k = std::round(t);
  const double r = t - k;  // exact, |r| <= 1/2
  const double ar = std::abs(r);
  double s, c;
  if (ar <= 0.25) {
    s = std::sin(kPi * r);
    c = std::cos(kPi * r);
  } else {
    const double comp = 0.5 - ar;  // exact by Sterbenz
    s = std::copysign(std::cos(kPi * comp), r);
    c = std::sin(kPi * comp);
  }
  if (std::fmod(k, 2.0) != 0.0) {
    s = -s;
    c = -c;
  }
  return {s, c};
}

double golden_mean() { return (std::sqrt(5.0) - 1.0) / 2.0; }

ContinuedFraction continued_fraction(double omega, int depth) {
  if (!(omega > 0.0 && omega < 1.0)) throw std::domain_error("continued_fraction: omega must lie in (0,1)");
  if (depth < 1 || depth > 40) throw std::domain_error("continued_fraction: depth must lie in [1,40]");

  using ld = long double;
  const ld w = omega;
  const ld tol = 4.0L * std::numeric_limits<double>::epsilon() * w;

  ContinuedFraction out;
  // Convergents p_{k-1}/q_{k-1} and p_k/q_k, starting from p_{-1}/q_{-1} = 1/0, p_0/q_0 = 0/1.
  ld p_prev = 1, q_prev = 0, p = 0, q = 1;
  for (int k = 0; k < depth; ++k) {
    // Remainder from the convergents keeps the recursion free of compounding error.
    const ld num = -(q_prev * w - p_prev);
    const ld den = q * w - p;
    const ld r = num / den;
    const ld a = std::floor(r);
    if (a > 1e12L) out.near_rational = true;
    if (a > static_cast<ld>(std::numeric_limits<std::int64_t>::max() / 4)) {
      out.terminated = true;
      break;
    }
    out.quotients.push_back(static_cast<std::int64_t>(a));
    const ld p_next = a * p + p_prev;
    const ld q_next = a * q + q_prev;
    p_prev = p;
    q_prev = q;
    p = p_next;
    q = q_next;
    if (std::abs(w - p / q) <= tol) {
      out.terminated = true;
      break;
    }
  }
  return out;
}

std::vector<Convergent> convergents(const std::vector<std::int64_t>& quotients) {
  std::vector<Convergent> out;
  std::int64_t p_prev = 1, q_prev = 0, p = 0, q = 1;
  for (std::int64_t a : quotients) {
    const std::int64_t pn = a * p + p_prev;
    const std::int64_t qn = a * q + q_prev;
    p_prev = p;
    q_prev = q;
    p = pn;
    q = qn;
    out.push_back({p, q});
  }
  return out;
}

Frequency Frequency::make(double omega, double A, int cf_depth) {
  if (!(omega > 0.0 && omega < 1.0)) throw std::domain_error("Frequency: omega must lie in (0,1)");
  if (!(A > 0.0)) throw std::domain_error("Frequency: A must be positive");
  Frequency f;
  f.omega = omega;
  f.A = A;
  f.cf = continued_fraction(omega, cf_depth).quotients;
  return f;
}

Frequency Frequency::golden(double A) { return make(golden_mean(), A); }

Frequency& Frequency::certify(std::int64_t K) {
  c = dc_constant(*this, K, A);
  K_checked = K;
  return *this;
}

double dc_constant(const Frequency& freq, std::int64_t K, double A) {
  if (K < 1) throw std::domain_error("dc_constant: K must be >= 1");
  if (!(A > 0.0)) throw std::domain_error("dc_constant: A must be positive");
  double best = std::numeric_limits<double>::infinity();
  for (std::int64_t k = 1; k <= K; ++k) {
    const double v = torus_norm(static_cast<double>(k) * freq.omega) * std::pow(static_cast<double>(k), A);
    if (v < best) best = v;
  }
  return best;
}

}  // namespace maryland
