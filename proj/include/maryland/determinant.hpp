#pragma once

// Determinant identities for the regularized matrix: the z-polynomial
// family B1(z), its value at the origin, and the Jensen inequality on |z|=1.

#include <vector>

#include <Eigen/Dense>

#include "maryland/linalg.hpp"
#include "maryland/model.hpp"

namespace maryland {

/// B1(z) over the window [0, N). Row n of B_N(x) times e^{i pi (x + n omega)}
/// equals row n of B1(e^{2 pi i x}), so |det B1| = |det B_N| on the circle.
class CircleMatrixFamily {
 public:
  CircleMatrixFamily(const ModelParams& params, int N);

  int size() const { return n_; }
  Eigen::MatrixXcd at(cplx z) const;
  /// B1(z) = C0 + z C1.
  const Eigen::MatrixXcd& constant_term() const { return c0_; }
  const Eigen::MatrixXcd& linear_term() const { return c1_; }
  /// Zeros of det B1, the eigenvalues of -C1^{-1} C0.
  std::vector<cplx> roots() const;

 private:
  const ModelParams* params_;
  int n_;
  Eigen::MatrixXcd c0_, c1_;
};

struct DetIdentityReport {
  int N = 0;
  double log_lhs = 0.0;           // log |det B1(0)|
  double log_rhs = 0.0;           // N log(|E-i|/2) + log |det(I - B2)|
  double discrepancy = 0.0;       // relative, |exp(log_rhs - log_lhs) - 1|
  double log_det_i_minus_b2 = 0.0;
  double b2_lower_bound = 0.0;    // N log(1 - eps ||phi_hat||_1)
  bool bound_holds = false;
  bool identity_ok = false;       // discrepancy <= 1e-8
};

DetIdentityReport det_identity_check(const ModelParams& params, int N);

struct JensenReport {
  int N = 0;
  int quad_points = 0;
  double circle_mean = 0.0;       // mean of log|det B1| over |z| = 1
  double log_det_at_zero = 0.0;
  double slack = 0.0;             // circle_mean - log_det_at_zero
  double refined_mean = 0.0;      // same quadrature with 2 * quad_points
  double convergence_delta = 0.0;
  double raw_trapezoid = 0.0;     // plain trapezoid without root subtraction
  int subtracted_roots = 0;
  bool pass = false;              // slack >= -1e-6
};

/// Trapezoid rule on the circle after subtracting log|z - z_k| for the zeros
/// z_k of det B1 lying near |z| = 1; their exact circle means log max(1,|z_k|)
/// are added back.
JensenReport jensen_check(const ModelParams& params, int N, int quad_points);

}  // namespace maryland
