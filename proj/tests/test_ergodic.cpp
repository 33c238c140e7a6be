#include <doctest.h>

#include <cmath>
#include <random>

#include "maryland/ergodic.hpp"

using namespace maryland;

namespace {

// Composite Simpson on [0, 1/2] of log(cos pi t + eta), doubled; smooth there for eta > 0.
double simpson_log_cos(double eta, int n) {
  const double h = 0.5 / n;
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double t = i * h;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * std::log(std::cos(kPi * t) + eta);
  }
  return 2.0 * acc * h / 3.0;
}

}  // namespace

TEST_CASE("alpha_of_E") {
  for (double E : {-5.0, -1.0, 0.0, 0.3, 2.0, 5.0}) {
    const auto a = alpha_of_E(E);
    CHECK(a.alpha > 0.0);
    CHECK(a.alpha < 1.0);
    CHECK(std::sin(kPi * a.alpha) == doctest::Approx(1.0 / std::sqrt(E * E + 1)).epsilon(1e-14));
    CHECK(std::cos(kPi * a.alpha) == doctest::Approx(E / std::sqrt(E * E + 1)).epsilon(1e-12).scale(1.0));
  }
  CHECK(alpha_of_E(0.0).alpha == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS(alpha_of_E(std::nan("")));
}

TEST_CASE("near_resonance_count") {
  const Frequency f = Frequency::golden();
  const auto a = alpha_of_E(0.7);
  CHECK(near_resonance_count(f, 0.1, a, 1000, 0.5) == 1000);
  CHECK(near_resonance_count(f, 0.1, a, 1000, 0.0) == 0);
  CHECK_THROWS(near_resonance_count(f, 0.1, a, 10, 0.6));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 10; ++t) {
    const double x = u(rng), kappa = 0.4 * u(rng);
    const std::int64_t N = 5000;
    std::int64_t ref = 0;
    long double ph = static_cast<long double>(x) + a.alpha - 0.5L;
    for (std::int64_t k = 0; k < N; ++k) {
      long double r = ph + static_cast<long double>(k) * f.omega;
      r -= std::floor(r + 0.5L);
      if (std::abs(r) < kappa) ++ref;
    }
    const auto c = near_resonance_count(f, x, a, N, kappa);
    CHECK(std::llabs(c - ref) <= 1);
    // Equidistribution with golden-mean discrepancy.
    CHECK(std::abs(static_cast<double>(c) / N - 2 * kappa) < 0.01);
  }
  // Monotone in kappa.
  std::int64_t prev = 0;
  for (double k = 0.0; k <= 0.5; k += 0.05) {
    const auto c = near_resonance_count(f, 0.2, a, 2000, k);
    CHECK(c >= prev);
    prev = c;
  }
}

TEST_CASE("log-cos integral") {
  CHECK(log_cos_integral(0.0) == doctest::Approx(-std::log(2.0)).epsilon(1e-12));
  for (double eta : {1e-2, 0.1, 1.0, 7.0}) {
    CHECK(log_cos_integral(eta) == doctest::Approx(simpson_log_cos(eta, 200000)).epsilon(1e-9));
  }
  CHECK(log_cos_integral(1e9) == doctest::Approx(std::log(1e9)).epsilon(1e-9));
  CHECK_THROWS(log_cos_integral(-1.0));
}

TEST_CASE("Birkhoff sums of log-cos") {
  const Frequency f = Frequency::golden();
  const auto r = birkhoff_log_cos(f, 0.123, alpha_of_E(0.5), 1 << 12, 1e-2);
  CHECK(r.integral == doctest::Approx(log_cos_integral(1e-2)));
  CHECK(r.ladder.size() == 9);
  CHECK(r.ladder.front() == 256);
  CHECK(r.ladder.back() == 65536);
  CHECK(r.discrepancy < 0.05);
  CHECK(r.delta_hat > 0.3);
  double direct = 0.0;
  for (int k = 0; k < (1 << 12); ++k)
    direct += std::log(std::abs(std::cos(kPi * (0.123 + alpha_of_E(0.5).alpha + k * f.omega))) + 1e-2);
  CHECK(r.sum == doctest::Approx(direct).epsilon(1e-9));
  CHECK_THROWS(birkhoff_log_cos(f, 0.0, alpha_of_E(0.0), 100, 0.0));
}

TEST_CASE("singular integral") {
  CHECK(singular_integral(0.0) == 0.0);
  for (double eta : {1e-6, 1e-4, 1e-2, 0.1, 0.5, 0.9}) {
    // I(eta) = int log(|cos| + eta) - int log|cos|.
    CHECK(singular_integral(eta) == doctest::Approx(log_cos_integral(eta) + std::log(2.0)).epsilon(1e-8));
  }
  // Monotone and below C sqrt(eta).
  double prev = 0.0;
  for (double eta = 1e-7; eta < 0.95; eta *= 3.0) {
    const double I = singular_integral(eta);
    CHECK(I > prev);
    CHECK(I <= 2.0 * std::sqrt(eta));
    prev = I;
  }
  CHECK_THROWS(singular_integral(1.0));
  CHECK_THROWS(singular_integral(-0.1));
}

TEST_CASE("singular integral check") {
  const auto r = singular_integral_check();
  CHECK(r.etas.size() == 6);
  CHECK(r.bound_ok);
  CHECK(r.stable);
  CHECK(r.lebesgue_ok);
  CHECK(r.loglog_slope > 0.5);
  for (std::size_t i = 1; i < r.c_running.size(); ++i) CHECK(r.c_running[i] >= r.c_running[i - 1]);
}

TEST_CASE("cos sublevel measure") {
  for (double eps : {0.0, 0.01, 0.3, 0.9, 1.0}) {
    // Grid count as the oracle.
    const int G = 1 << 18;
    int c = 0;
    for (int i = 0; i < G; ++i)
      if (std::abs(std::cos(kPi * (i + 0.5) / G)) < eps) ++c;
    CHECK(std::abs(cos_sublevel_measure(eps) - static_cast<double>(c) / G) < 2.0 / G);
    CHECK(cos_sublevel_measure(eps) <= eps);
  }
  CHECK_THROWS(cos_sublevel_measure(1.5));
}
