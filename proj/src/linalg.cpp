#include "maryland/linalg.hpp"

#include <bit>
#include <cstdint>

namespace maryland {

namespace {

template <class T>
LogDet dense_log_det(Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> m) {
  const Eigen::Index n = m.rows();
  if (n < 1 || m.cols() != n) throw std::invalid_argument("log_abs_det: matrix must be square, side >= 1");
  if (!m.allFinite()) throw std::domain_error("log_abs_det: non-finite entry");

  LogDet out;
  double acc = 0.0;
  cplx phase{1.0, 0.0};
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index p = k;
    double best = detail::magnitude(m(k, k));
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const double v = detail::magnitude(m(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (best == 0.0) {
      out.log_abs = -std::numeric_limits<double>::infinity();
      out.phase = {0.0, 0.0};
      out.rank_deficient = true;
      return out;
    }
    if (p != k) {
      m.row(k).tail(n - k).swap(m.row(p).tail(n - k));
      phase = -phase;
    }
    const T pivot = m(k, k);
    acc += std::log(detail::magnitude(pivot));
    phase *= detail::unit_phase(pivot);
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const T l = m(i, k) / pivot;
      if (l == T{}) continue;
      m.row(i).tail(n - k - 1).noalias() -= l * m.row(k).tail(n - k - 1);
    }
  }
  out.log_abs = acc;
  out.phase = phase / std::abs(phase);
  return out;
}

}  // namespace

LogDet log_abs_det(const Eigen::MatrixXd& a) { return dense_log_det<double>(a); }
LogDet log_abs_det(const Eigen::MatrixXcd& a) { return dense_log_det<cplx>(a); }

cplx cofactor_det(const Eigen::MatrixXcd& a) {
  const int n = static_cast<int>(a.rows());
  if (n != a.cols()) throw std::invalid_argument("cofactor_det: matrix must be square");
  if (n == 0) return {1.0, 0.0};
  if (n > 20) throw std::invalid_argument("cofactor_det: side > 20 refused");

  // d[S] = det of rows [0, |S|) restricted to the sorted columns in S,
  // expanded along its last row.
  const std::uint32_t full = (1u << n) - 1u;
  std::vector<cplx> d(static_cast<std::size_t>(full) + 1);
  d[0] = {1.0, 0.0};
  for (std::uint32_t s = 1; s <= full; ++s) {
    const int k = std::popcount(s);
    const int row = k - 1;
    cplx acc{0.0, 0.0};
    int t = 0;
    for (int c = 0; c < n; ++c) {
      if (!(s & (1u << c))) continue;
      const cplx term = a(row, c) * d[s & ~(1u << c)];
      acc += ((row + t) % 2 == 0) ? term : -term;
      ++t;
    }
    d[s] = acc;
  }
  return d[full];
}

Eigen::MatrixXcd minor_matrix(const Eigen::MatrixXcd& a, int r, int c) {
  const int n = static_cast<int>(a.rows());
  Eigen::MatrixXcd out(n - 1, n - 1);
  for (int i = 0, oi = 0; i < n; ++i) {
    if (i == r) continue;
    for (int j = 0, oj = 0; j < n; ++j) {
      if (j == c) continue;
      out(oi, oj++) = a(i, j);
    }
    ++oi;
  }
  return out;
}

}  // namespace maryland
