#include "maryland/determinant.hpp"

#include <Eigen/Eigenvalues>

namespace maryland {

namespace {

constexpr cplx kI{0.0, 1.0};

double circle_mean(const CircleMatrixFamily& fam, const std::vector<cplx>& near, int points) {
  double acc = 0.0;
  for (int j = 0; j < points; ++j) {
    const double theta = 2.0 * kPi * (j + 0.5) / points;
    const cplx z = std::polar(1.0, theta);
    double v = log_abs_det(fam.at(z)).log_abs;
    for (const cplx& r : near) v -= std::log(std::abs(z - r));
    acc += v;
  }
  double mean = acc / points;
  for (const cplx& r : near) mean += std::log(std::max(1.0, std::abs(r)));
  return mean;
}

}  // namespace

CircleMatrixFamily::CircleMatrixFamily(const ModelParams& params, int N) : params_(&params), n_(N) {
  if (N < 1) throw std::invalid_argument("CircleMatrixFamily: N must be >= 1");
  const double eps = params.eps;
  const double E = params.E;
  c0_ = Eigen::MatrixXcd::Zero(N, N);
  c1_ = Eigen::MatrixXcd::Zero(N, N);
  const int radius = params.symbol.radius();
  for (int n = 0; n < N; ++n) {
    const double phase = 2.0 * kPi * torus_reduce(orbit_phase(0.0, n, params.freq.omega));
    const cplx w = std::polar(1.0, phase);
    for (int m = std::max(0, n - radius); m <= std::min(N - 1, n + radius); ++m) {
      const cplx s = eps * params.symbol(n - m);
      if (m == n) {
        // (1/2i)(w z - 1) + (1/2)(s - E)(w z + 1)
        c0_(n, n) = -1.0 / (2.0 * kI) + 0.5 * (s - E);
        c1_(n, m) = w / (2.0 * kI) + 0.5 * (s - E) * w;
      } else {
        c0_(n, m) = 0.5 * s;
        c1_(n, m) = 0.5 * s * w;
      }
    }
  }
}

Eigen::MatrixXcd CircleMatrixFamily::at(cplx z) const { return c0_ + z * c1_; }

std::vector<cplx> CircleMatrixFamily::roots() const {
  const Eigen::MatrixXcd m = -c1_.partialPivLu().solve(c0_);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
  if (es.info() != Eigen::Success) throw std::runtime_error("CircleMatrixFamily: eigensolver failed");
  std::vector<cplx> out(es.eigenvalues().data(), es.eigenvalues().data() + n_);
  return out;
}

DetIdentityReport det_identity_check(const ModelParams& params, int N) {
  const double l1 = params.symbol.l1_norm();
  if (!(params.eps * l1 < 1.0)) throw std::invalid_argument("det_identity_check: eps * ||phi_hat||_1 must be < 1");
  const CircleMatrixFamily fam(params, N);
  DetIdentityReport r;
  r.N = N;
  r.log_lhs = log_abs_det(fam.at(0.0)).log_abs;

  const cplx e_minus_i = cplx(params.E, 0.0) - kI;
  Eigen::MatrixXcd i_minus_b2 = Eigen::MatrixXcd::Identity(N, N);
  const int radius = params.symbol.radius();
  for (int n = 0; n < N; ++n)
    for (int m = std::max(0, n - radius); m <= std::min(N - 1, n + radius); ++m)
      i_minus_b2(n, m) -= params.eps * params.symbol(n - m) / e_minus_i;
  r.log_det_i_minus_b2 = log_abs_det(i_minus_b2).log_abs;
  r.log_rhs = N * std::log(std::abs(e_minus_i) / 2.0) + r.log_det_i_minus_b2;
  r.discrepancy = std::abs(std::expm1(r.log_rhs - r.log_lhs));
  r.b2_lower_bound = N * std::log1p(-params.eps * l1);
  r.bound_holds = r.log_det_i_minus_b2 >= r.b2_lower_bound;
  r.identity_ok = r.discrepancy <= 1e-8;
  return r;
}

JensenReport jensen_check(const ModelParams& params, int N, int quad_points) {
  if (quad_points < 64) throw std::invalid_argument("jensen_check: quad_points must be >= 64");
  const CircleMatrixFamily fam(params, N);
  std::vector<cplx> near;
  for (const cplx& r : fam.roots())
    if (std::abs(std::abs(r) - 1.0) < 0.25) near.push_back(r);

  JensenReport rep;
  rep.N = N;
  rep.quad_points = quad_points;
  rep.subtracted_roots = static_cast<int>(near.size());
  rep.log_det_at_zero = log_abs_det(fam.at(0.0)).log_abs;
  rep.circle_mean = circle_mean(fam, near, quad_points);
  rep.refined_mean = circle_mean(fam, near, 2 * quad_points);
  rep.convergence_delta = std::abs(rep.refined_mean - rep.circle_mean);
  rep.raw_trapezoid = circle_mean(fam, {}, quad_points);
  rep.slack = rep.circle_mean - rep.log_det_at_zero;
  rep.pass = rep.slack >= -1e-6;
  return rep;
}

}  // namespace maryland
