#include <doctest.h>

#include <cmath>
#include <random>

#include "maryland/determinant.hpp"

using namespace maryland;

namespace {

ModelParams params_with(double eps, double E) {
  return ModelParams::make(Frequency::golden(), LongRangeSymbol::exp_decay(1.0, 1.0, 0.99), eps, E, 5.0,
                           std::max(eps, 0.01));
}

Eigen::MatrixXcd random_matrix(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cplx(g(rng), g(rng));
  return m;
}

}  // namespace

TEST_CASE("log_abs_det basics") {
  Eigen::MatrixXd d = Eigen::Vector3d(2, 3, 4).asDiagonal();
  const LogDet r = log_abs_det(d);
  CHECK(r.log_abs == doctest::Approx(std::log(24.0)).epsilon(1e-15));
  CHECK(r.phase == cplx(1.0));
  CHECK_FALSE(r.rank_deficient);

  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(3, 3);
  s(0, 0) = 1.0;
  const LogDet z = log_abs_det(s);
  CHECK(z.rank_deficient);
  CHECK(std::isinf(z.log_abs));
  CHECK(z.log_abs < 0);
  CHECK_THROWS(log_abs_det(Eigen::MatrixXd(2, 3)));
}

TEST_CASE("log_abs_det matches cofactor expansion") {
  std::mt19937_64 rng(3);
  for (int n = 1; n <= 8; ++n) {
    for (int t = 0; t < 5; ++t) {
      const Eigen::MatrixXcd m = random_matrix(rng, n);
      const cplx exact = cofactor_det(m);
      const cplx got = log_abs_det(m).value();
      CHECK(std::abs(got - exact) <= 1e-10 * std::abs(exact));
    }
  }
}

TEST_CASE("cofactor_det agrees with an explicit 3x3 formula") {
  Eigen::MatrixXcd m(3, 3);
  m << 1, 2, 3, 4, 5, 6, 7, 8, 10;
  CHECK(std::abs(cofactor_det(m) - cplx(-3.0)) < 1e-13);
}

TEST_CASE("no overflow at large sides") {
  const int n = 2048;
  Eigen::MatrixXd m = 1e3 * Eigen::MatrixXd::Identity(n, n);
  m(0, 1) = 0.5;
  const LogDet r = log_abs_det(m);
  CHECK(std::isfinite(r.log_abs));
  CHECK(r.log_abs == doctest::Approx(n * std::log(1e3)).epsilon(1e-12));
  Eigen::MatrixXd small = 1e-3 * Eigen::MatrixXd::Identity(n, n);
  CHECK(log_abs_det(small).log_abs == doctest::Approx(n * std::log(1e-3)).epsilon(1e-12));
}

TEST_CASE("permutation invariance and multiplicativity") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    const int n = 2 + static_cast<int>(rng() % 60);
    const Eigen::MatrixXcd a = random_matrix(rng, n) + 4.0 * Eigen::MatrixXcd::Identity(n, n);
    const Eigen::MatrixXcd b = random_matrix(rng, n) + 4.0 * Eigen::MatrixXcd::Identity(n, n);
    Eigen::PermutationMatrix<Eigen::Dynamic> p(n);
    p.setIdentity();
    std::shuffle(p.indices().data(), p.indices().data() + n, rng);
    const double la = log_abs_det(a).log_abs;
    CHECK(log_abs_det(Eigen::MatrixXcd(p * a)).log_abs == doctest::Approx(la).epsilon(1e-10));
    CHECK(log_abs_det(Eigen::MatrixXcd(a * p)).log_abs == doctest::Approx(la).epsilon(1e-10));
    const double lab = log_abs_det(Eigen::MatrixXcd(a * b)).log_abs;
    CHECK(lab == doctest::Approx(la + log_abs_det(b).log_abs).epsilon(1e-8));
  }
}

TEST_CASE("BandLU agrees with dense elimination and solves") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  for (int t = 0; t < 10; ++t) {
    const int n = 5 + static_cast<int>(rng() % 40);
    const int kl = static_cast<int>(rng() % 6), ku = static_cast<int>(rng() % 6);
    BandLU<double> lu(n, kl, ku);
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = std::max(0, i - lu.lower()); j <= std::min(n - 1, i + lu.upper()); ++j) dense(i, j) = lu(i, j) = g(rng);
    lu.factor();
    const LogDet a = lu.log_det(), b = log_abs_det(dense);
    CHECK(a.log_abs == doctest::Approx(b.log_abs).epsilon(1e-10));
    CHECK(a.phase == b.phase);
    Eigen::VectorXd rhs = Eigen::VectorXd::NullaryExpr(n, [&] { return g(rng); });
    std::vector<double> x(rhs.data(), rhs.data() + n);
    lu.solve_in_place(x);
    const Eigen::VectorXd xv = Eigen::Map<Eigen::VectorXd>(x.data(), n);
    CHECK((dense * xv - rhs).norm() <= 1e-9 * (1 + rhs.norm()) * dense.norm() * xv.norm());
  }
}

TEST_CASE("eps = 0 window determinant is a product") {
  const auto p = params_with(0.0, 0.4);
  const auto w = assemble_window(p, 0.123, {0, 19});
  double expect = 0.0;
  for (int n = 0; n < 20; ++n) {
    const double t = 0.123 + n * p.freq.omega;
    expect += std::log(std::abs(std::sin(kPi * t) - 0.4 * std::cos(kPi * t)));
  }
  CHECK(log_abs_det(w.b_matrix).log_abs == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("B1 on the circle reproduces |det B_N|") {
  const auto p = params_with(0.05, 0.8);
  const int N = 12;
  const CircleMatrixFamily fam(p, N);
  for (double x : {0.0, 0.17, 0.5, 0.71}) {
    const double direct = log_abs_det(assemble_window(p, x, {0, N - 1}).b_matrix).log_abs;
    const double viaz = log_abs_det(fam.at(std::polar(1.0, 2 * kPi * x))).log_abs;
    CHECK(std::abs(std::expm1(viaz - direct)) < 1e-8);
  }
  // det B1 at its computed zeros is numerically zero relative to nearby values.
  for (const cplx& r : fam.roots()) {
    const double at = log_abs_det(fam.at(r)).log_abs;
    const double near = log_abs_det(fam.at(r * 1.01)).log_abs;
    CHECK(at < near - 5.0);
  }
}

TEST_CASE("determinant identity at the origin") {
  const auto p0 = params_with(0.0, 2.0);
  const auto r0 = det_identity_check(p0, 5);
  CHECK(r0.discrepancy < 1e-14);
  CHECK(r0.log_lhs == doctest::Approx(5 * std::log(std::abs(cplx(2.0, -1.0)) / 2)).epsilon(1e-14));

  const auto r = det_identity_check(params_with(0.01, 0.0), 8);
  CHECK(r.discrepancy < 1e-10);
  CHECK(r.identity_ok);

  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    const double eps = 0.4 * u(rng);
    const int N = 1 + static_cast<int>(rng() % 32);
    const auto rep = det_identity_check(params_with(eps, 5.0 * u(rng) - 2.5), N);
    CHECK(rep.bound_holds);
    CHECK(rep.identity_ok);
  }
}

TEST_CASE("Jensen inequality on the circle") {
  {
    const auto p = params_with(0.0, 0.0);
    const auto r = jensen_check(p, 4, 256);
    CHECK(r.pass);
    CHECK(r.slack >= -1e-6);
    CHECK(r.convergence_delta < 1e-6);
  }
  {
    const auto p = params_with(0.0, 1.7);
    const auto r = jensen_check(p, 1, 64);
    CHECK(r.log_det_at_zero == doctest::Approx(std::log(std::abs(cplx(1.7, -1.0)) / 2)).epsilon(1e-14));
    CHECK(r.slack >= -1e-6);
  }
  for (double eps : {0.01, 0.1, 0.3}) {
    for (double E : {0.0, 1.0, 3.0}) {
      const auto r = jensen_check(params_with(eps, E), 10, 128);
      CHECK(r.pass);
      CHECK(r.convergence_delta < 1e-6);
    }
  }
  CHECK_THROWS(jensen_check(params_with(0.0, 0.0), 4, 32));
}

TEST_CASE("mean lower bound chain at the origin") {
  // log|det B1(0)| / N >= 1/2 log(1+E^2) - log 2 + log(1 - eps l1)
  for (double eps : {0.0, 0.01, 0.2})
    for (double E : {0.0, 1.0, 3.0}) {
      const auto p = params_with(eps, E);
      const auto r = det_identity_check(p, 16);
      const double lb = 0.5 * std::log1p(E * E) - std::log(2.0) + std::log1p(-eps * p.symbol.l1_norm());
      CHECK(r.log_lhs / 16 >= lb - 1e-12);
    }
}
