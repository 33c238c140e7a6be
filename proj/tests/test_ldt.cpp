#include <doctest.h>

#include <cmath>
#include <random>

#include "maryland/ldt.hpp"

using namespace maryland;

namespace {

ModelParams params_with(double eps, double E) {
  return ModelParams::make(Frequency::golden(), LongRangeSymbol::exp_decay(1.0, 1.0, 0.99), eps, E, 5.0,
                           std::max(eps, 0.01));
}

}  // namespace

TEST_CASE("u_function examples") {
  const auto p = params_with(0.0, 0.0);
  CHECK(u_function(p, 1, 0.25) == doctest::Approx(std::log(std::sin(kPi / 4) + 0.1)).epsilon(1e-14));
  CHECK(u_function(p, 1, 0.25) == doctest::Approx(-0.21430).epsilon(1e-4));
  CHECK(u_function(p, 1, 0.5) == doctest::Approx(std::log(1.1)).epsilon(1e-14));
  // x = 0 puts a zero on the diagonal: the floor takes over.
  CHECK(u_function(p, 10, 0.0) == doctest::Approx(-std::log(10.0)).epsilon(1e-14));
  CHECK(u_from_log_det(-1e308 * 10, 5) == doctest::Approx(-std::log(10.0)));
  // log-space sum equals the direct formula where the latter is representable
  CHECK(u_from_log_det(std::log(0.3), 2) == doctest::Approx(0.5 * std::log(0.3 + 0.01)).epsilon(1e-14));
}

TEST_CASE("u_function agrees with a dense evaluation") {
  const auto p = params_with(0.05, 0.6);
  for (double x : {0.01, 0.3, 0.77}) {
    const auto w = assemble_window(p, x, {0, 31});
    const double la = log_abs_det(w.b_matrix).log_abs;
    CHECK(u_function(p, 32, x) == doctest::Approx(u_from_log_det(la, 32)).epsilon(1e-12));
  }
}

TEST_CASE("Fejer weights and averages") {
  for (int M : {1, 2, 3, 10, 57, 512}) {
    const auto w = fejer_weights(M);
    long long s = 0;
    for (int m = -(M - 1); m <= M - 1; ++m) s += M - std::abs(m);
    CHECK(s == static_cast<long long>(M) * M);
    double ws = 0.0;
    for (double v : w) ws += v;
    CHECK(ws == doctest::Approx(1.0).epsilon(1e-14));
  }
  const Frequency f = Frequency::golden();
  CHECK(fejer_average([](double) { return 2.5; }, 0.3, f, 17) == doctest::Approx(2.5).epsilon(1e-14));
  auto cosu = [](double x) { return std::cos(2 * kPi * x); };
  CHECK(fejer_average(cosu, 0.42, f, 1) == cosu(0.42));
  CHECK(fejer_average(cosu, 0.0, f, 2) == doctest::Approx(0.5 + 0.5 * std::cos(2 * kPi * f.omega)).epsilon(1e-14));
  CHECK(fejer_average(cosu, 0.0, f, 2) == doctest::Approx(0.13132).epsilon(1e-4));

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    const double a = u(rng), b = u(rng), x = u(rng), ph = u(rng);
    auto u1 = [ph](double y) { return std::sin(2 * kPi * (3 * y + ph)); };
    auto u2 = [](double y) { return std::log(2.0 + std::cos(2 * kPi * y)); };
    auto mix = [&](double y) { return a * u1(y) + b * u2(y); };
    const int M = 1 + static_cast<int>(rng() % 30);
    const double lhs = fejer_average(mix, x, f, M);
    const double rhs = a * fejer_average(u1, x, f, M) + b * fejer_average(u2, x, f, M);
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
}

TEST_CASE("Fejer kernel closed form and bound") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const double theta = u(rng);
    const int M = 1 + static_cast<int>(rng() % 512);
    // Direct complex exponential sum as an independent oracle.
    cplx acc{0.0, 0.0};
    for (int m = -(M - 1); m <= M - 1; ++m) acc += static_cast<double>(M - std::abs(m)) * std::polar(1.0, 2 * kPi * m * theta);
    acc /= static_cast<double>(M) * M;
    CHECK(std::abs(fejer_kernel_closed(M, theta) - acc) < 1e-12);
    CHECK(std::abs(fejer_kernel_direct(M, theta) - acc.real()) < 1e-12);
  }
  CHECK(fejer_kernel_closed(2, 0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(fejer_kernel_closed(7, 1e-9) == doctest::Approx(1.0).epsilon(1e-12));

  const auto r = fejer_kernel_bound_check(Frequency::golden(), 100, 10000);
  CHECK(r.pass);
  CHECK(r.min_kernel >= 0.0);
  CHECK(r.max_ratio < 1.0);
}

TEST_CASE("grid Fourier coefficients") {
  const int G = 4096;
  auto cosu = [](double x) { return std::cos(2 * kPi * x); };
  const auto s = sample_function(cosu, G, 256, 1.0);
  CHECK(std::abs(s.fourier[1] - cplx(0.5)) < 1e-13);
  for (int k = 2; k <= 256; ++k) CHECK(std::abs(s.fourier[k]) < 1e-13);
  const auto fd = fourier_decay_check(s);
  CHECK(fd.max_k_coeff == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fd.argmax_k == 1);

  auto logsin = [](double x) { return std::log(std::abs(2.0 * std::sin(kPi * x))); };
  const auto ls = sample_function(logsin, 1 << 14, 512, 1.0);
  const auto fl = fourier_decay_check(ls);
  // The maximum sits at k = 1, where midpoint aliasing is about ln2 / G.
  CHECK(std::abs(fl.max_k_coeff - 0.5) < 1e-3);
  CHECK(std::abs(ls.fourier[0]) < 1e-4);
  CHECK(std::abs(ls.fourier[1] + 0.5) < 1e-3);
  // Compare with the naive O(G K) transform at a few k.
  for (int k : {1, 37, 400}) {
    cplx acc{0.0, 0.0};
    for (int j = 0; j < (1 << 14); ++j) acc += ls.values[j] * std::polar(1.0, -2 * kPi * k * ls.grid[j]);
    acc /= static_cast<double>(1 << 14);
    CHECK(std::abs(acc - ls.fourier[k]) < 1e-10);
  }
  CHECK_THROWS(grid_fourier(std::vector<double>(64, 0.0), 17));
}

TEST_CASE("mean estimates") {
  const auto p = params_with(0.0, 0.0);
  const auto s = sample_u(p, 32, 1 << 14, 64, 1);
  const auto m = mean_estimate(s);
  CHECK(std::abs(m.estimate + std::log(2.0)) < 2e-3);
  CHECK(m.slack >= -2e-3);

  const auto p3 = params_with(0.0, std::sqrt(3.0));
  const auto m3 = mean_estimate(sample_u(p3, 32, 1 << 14, 64, 1));
  CHECK(std::abs(m3.estimate) < 2e-3);

  // Grid refinement away from resonances.
  const auto pe = params_with(0.01, 1.0);
  const double a = mean_estimate(sample_u(pe, 32, 1 << 13, 64, 1)).estimate;
  const double b = mean_estimate(sample_u(pe, 32, 1 << 14, 64, 1)).estimate;
  CHECK(std::abs(a - b) < 1e-4);
  CHECK_THROWS(mean_estimate(sample_function([](double) { return 0.0; }, 128, 0, 1.0)));
}

TEST_CASE("deviation profiles") {
  const Frequency f = Frequency::golden();
  const auto c = deviation_profile([](double) { return 0.7; }, f, 4096, 8, 0.01, std::nullopt);
  CHECK(c.bad_fraction == 0.0);
  CHECK(std::isinf(c.c_tilde_fit));

  auto cosu = [](double x) { return std::cos(2 * kPi * x); };
  const auto z = deviation_profile(cosu, f, 4096, 8, 0.01, 0.0);
  CHECK(z.bad_fraction == 1.0);
  CHECK(z.bad_count == 4096);

  // Monotone in the threshold, exactly.
  const auto q = deviation_profile(cosu, f, 4096, 3, 0.01, 0.01);
  REQUIRE(q.bad_fraction > 0.0);
  REQUIRE(q.bad_fraction < 1.0);
  double prev = 1.0;
  for (double t = 0.0; t < 1.0; t += 0.01) {
    const double bf = bad_fraction_at(q, t);
    CHECK(bf <= prev);
    prev = bf;
  }
  // bad_fraction equals the grid count in bad_set
  double covered = 0.0;
  for (const auto& iv : q.bad_set) covered += iv.hi - iv.lo;
  CHECK(covered == doctest::Approx(q.bad_fraction).epsilon(1e-12));
  CHECK(q.c_tilde_fit == doctest::Approx(-std::log(q.bad_fraction) / std::pow(3.0, 0.01)));
}

TEST_CASE("bad set runs") {
  const std::vector<std::uint8_t> flags{1, 1, 0, 0, 1, 0, 1, 1};
  const auto s = bad_set_from_flags(flags);
  REQUIRE(s.size() == 3);
  CHECK(s[0].lo == 0.0);
  CHECK(s[0].hi == 0.25);
  CHECK(s[1].lo == 0.5);
  CHECK(s[2].hi == 1.0);
}

TEST_CASE("deviation trend at eps = 0 with a sharper threshold") {
  // With the default sigma the threshold M^{-sigma} is close to 1 and nothing
  // deviates at desk scale; a threshold of 0.05 shows the shrinking bad set.
  const auto p = params_with(0.0, 0.0);
  DeviationOptions o8;
  o8.M = 8;
  o8.threshold = 0.05;
  o8.threads = 1;
  DeviationOptions o16 = o8;
  o16.M = 16;
  const auto a = deviation_measure(p, 64, 4096, o8);
  const auto b = deviation_measure(p, 64, 4096, o16);
  CHECK(a.bad_fraction > 0.0);
  CHECK(b.bad_fraction < a.bad_fraction);
  CHECK(a.c_tilde_fit > 0.0);
}

TEST_CASE("deviation_measure is thread-count independent") {
  const auto p = params_with(0.01, 0.5);
  DeviationOptions o;
  o.M = 4;
  o.threads = 1;
  const auto a = deviation_measure(p, 16, 4096, o);
  o.threads = 4;
  const auto b = deviation_measure(p, 16, 4096, o);
  CHECK(a.v_values == b.v_values);
  CHECK(a.u_hat0 == b.u_hat0);
}

TEST_CASE("Fourier decay of the model u") {
  const auto p = params_with(0.01, 0.0);
  const auto s = sample_u(p, 32, 1 << 13, 128, 1);
  const auto r = fourier_decay_check(s);
  CHECK(r.pass);
  CHECK(r.ratio <= 10.0);
}

TEST_CASE("measure refinement") {
  const auto flat = sample_function([](double) { return -0.3; }, 4096, 64, 1.0);
  const auto r = measure_refinement_check(flat, 0.1, 0.1);
  CHECK(r.hypothesis_ok);
  CHECK(std::isinf(r.c_fit));
  CHECK(r.pass);

  const auto cs = sample_function([](double x) { return std::cos(2 * kPi * x); }, 4096, 64, 1.0);
  const auto rc = measure_refinement_check(cs, 1.1, 0.1);
  CHECK(rc.hypothesis_measure == 0.0);
  CHECK(rc.lhs_measure == 0.0);

  const auto bad = measure_refinement_check(cs, 0.2, 0.1);
  CHECK_FALSE(bad.hypothesis_ok);
  CHECK_FALSE(bad.pass);

  const auto p = params_with(0.01, 0.0);
  const auto s = sample_u(p, 32, 4096, 64, 1);
  const double M = std::round(std::sqrt(32.0));
  const auto rm = measure_refinement_check(s, std::pow(M, -1.0 / 50.0), std::pow(M, -3.0 / 50.0));
  CHECK(rm.hypothesis_ok);
  CHECK(rm.c_fit > 0.0);
}
