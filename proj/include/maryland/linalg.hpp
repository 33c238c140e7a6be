#pragma once

// Pivoted LU factorizations that report determinants in log form, plus a
// cofactor (subset-expansion) determinant used as an elimination-free oracle.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace maryland {

using cplx = std::complex<double>;

/// Natural log of |det| with the unit-modulus phase kept separately.
/// A rank-deficient matrix has log_abs = -inf and phase 0.
struct LogDet {
  double log_abs = 0.0;
  cplx phase{1.0, 0.0};
  bool rank_deficient = false;

  /// exp(log_abs) * phase; overflows for large matrices, so only for small sides.
  cplx value() const {
    if (rank_deficient) return {0.0, 0.0};
    return std::exp(log_abs) * phase;
  }
};

namespace detail {
inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const cplx& v) { return std::abs(v); }
inline cplx unit_phase(double v) { return {v < 0.0 ? -1.0 : 1.0, 0.0}; }
inline cplx unit_phase(const cplx& v) { return v / std::abs(v); }
}  // namespace detail

/// Banded LU with row partial pivoting (LAPACK gbtrf layout, row-major).
///
/// Row i stores columns [i - kl, i + kl + ku]; the extra kl columns hold
/// fill-in produced by row interchanges. Multipliers stay in the positions
/// where they were produced, so solves interleave the pivots exactly as
/// the factorization applied them.
template <class T>
class BandLU {
 public:
  BandLU() = default;
  BandLU(int n, int kl, int ku) { reset(n, kl, ku); }

  void reset(int n, int kl, int ku) {
    if (n < 1 || kl < 0 || ku < 0) throw std::invalid_argument("BandLU: bad shape");
    n_ = n;
    kl_ = std::min(kl, n - 1);
    ku_ = std::min(ku, n - 1);
    width_ = 2 * kl_ + ku_ + 1;
    data_.assign(static_cast<std::size_t>(n_) * width_, T{});
    piv_.assign(n_, 0);
    factored_ = false;
    singular_ = false;
  }

  int size() const { return n_; }
  int lower() const { return kl_; }
  int upper() const { return ku_; }

  /// Element access before factorization: requires -kl <= j - i <= ku.
  T& operator()(int i, int j) { return data_[index(i, j)]; }
  const T& operator()(int i, int j) const { return data_[index(i, j)]; }

  bool in_band(int i, int j) const { return j - i >= -kl_ && j - i <= ku_; }

  void factor() {
    for (int k = 0; k < n_; ++k) {
      const int last_row = std::min(n_ - 1, k + kl_);
      const int last_col = std::min(n_ - 1, k + kl_ + ku_);
      int p = k;
      double best = detail::magnitude((*this)(k, k));
      for (int i = k + 1; i <= last_row; ++i) {
        const double m = detail::magnitude((*this)(i, k));
        if (m > best) {
          best = m;
          p = i;
        }
      }
      piv_[k] = p;
      if (best == 0.0) {
        singular_ = true;
        continue;
      }
      if (p != k) {
        T* rk = &(*this)(k, k);
        T* rp = &(*this)(p, k);
        for (int j = 0; j <= last_col - k; ++j) std::swap(rk[j], rp[j]);
      }
      const T pivot = (*this)(k, k);
      const T* rk = &(*this)(k, k);
      const int span = last_col - k;
      for (int i = k + 1; i <= last_row; ++i) {
        T* ri = &(*this)(i, k);
        if (ri[0] == T{}) continue;
        const T l = ri[0] / pivot;
        ri[0] = l;
        for (int j = 1; j <= span; ++j) ri[j] -= l * rk[j];
      }
    }
    factored_ = true;
  }

  bool singular() const { return singular_; }

  LogDet log_det() const {
    require_factored();
    LogDet out;
    if (singular_) {
      out.log_abs = -std::numeric_limits<double>::infinity();
      out.phase = {0.0, 0.0};
      out.rank_deficient = true;
      return out;
    }
    double acc = 0.0;
    cplx phase{1.0, 0.0};
    for (int k = 0; k < n_; ++k) {
      const T u = (*this)(k, k);
      acc += std::log(detail::magnitude(u));
      phase *= detail::unit_phase(u);
      if (piv_[k] != k) phase = -phase;
    }
    out.log_abs = acc;
    out.phase = phase / std::abs(phase);
    return out;
  }

  void solve_in_place(std::span<T> rhs) const {
    require_factored();
    if (singular_) throw std::domain_error("BandLU: singular matrix");
    if (static_cast<int>(rhs.size()) != n_) throw std::invalid_argument("BandLU: rhs size");
    for (int k = 0; k < n_; ++k) {
      const int p = piv_[k];
      if (p != k) std::swap(rhs[k], rhs[p]);
      const T bk = rhs[k];
      if (bk == T{}) continue;
      const int last_row = std::min(n_ - 1, k + kl_);
      for (int i = k + 1; i <= last_row; ++i) rhs[i] -= (*this)(i, k) * bk;
    }
    for (int k = n_ - 1; k >= 0; --k) {
      const int last_col = std::min(n_ - 1, k + kl_ + ku_);
      const T* rk = &(*this)(k, k);
      T s = rhs[k];
      for (int j = 1; j <= last_col - k; ++j) s -= rk[j] * rhs[k + j];
      rhs[k] = s / rk[0];
    }
  }

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * width_ + static_cast<std::size_t>(j - i + kl_);
  }
  void require_factored() const {
    if (!factored_) throw std::logic_error("BandLU: factor() not called");
  }

  int n_ = 0, kl_ = 0, ku_ = 0, width_ = 0;
  std::vector<T> data_;
  std::vector<int> piv_;
  bool factored_ = false;
  bool singular_ = false;
};

/// Log-determinant of a dense square matrix via row-pivoted elimination.
/// Pivot ties resolve to the lowest row index. Never forms the raw product.
LogDet log_abs_det(const Eigen::MatrixXd& a);
LogDet log_abs_det(const Eigen::MatrixXcd& a);

/// Determinant by Laplace expansion memoized over column subsets
/// (O(2^n n) work). Elimination-free, for small oracle checks only.
cplx cofactor_det(const Eigen::MatrixXcd& a);

/// Matrix with row r and column c removed.
Eigen::MatrixXcd minor_matrix(const Eigen::MatrixXcd& a, int r, int c);

}  // namespace maryland
