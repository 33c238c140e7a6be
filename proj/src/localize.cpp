#include "maryland/localize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace maryland {

namespace {

Interval symmetric(int N) {
  if (N < 0) throw std::invalid_argument("eigensystem: N must be >= 0");
  return {-static_cast<std::int64_t>(N), N};
}

void require_nonsingular(const ModelParams& params, double x, Interval iv) {
  for (std::int64_t n = iv.first; n <= iv.last; ++n) {
    if (torus_norm(orbit_phase(x - 0.5, n, params.freq.omega)) < kSingularityTolerance) {
      std::ostringstream os;
      os << "window has a pole at site " << n;
      throw SingularWindowError(os.str(), n);
    }
  }
}

template <class T>
Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> dense_h(const ModelParams& params, double x, Interval iv) {
  const int size = iv.size();
  const int radius = params.symbol.radius();
  Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> h = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>::Zero(size, size);
  for (int i = 0; i < size; ++i) {
    const PiTrig t = trig_pi(orbit_phase(x, iv.first + i, params.freq.omega));
    for (int j = std::max(0, i - radius); j <= std::min(size - 1, i + radius); ++j) {
      const cplx v = params.eps * params.symbol(i - j);
      if constexpr (std::is_same_v<T, double>) {
        h(i, j) = v.real();
      } else {
        h(i, j) = v;
      }
    }
    h(i, i) += t.sin / t.cos;
  }
  return h;
}

// Each inverse-iteration step suppresses solver noise in the tails by about
// the relative eigenvalue accuracy, so tails resolve far below 1e-16.
constexpr int kRefineSteps = 12;

template <class T>
EigenReport eigensystem_impl(const ModelParams& params, double x, Interval iv, bool refine) {
  using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;
  const Mat h = dense_h<T>(params, x, iv);
  const int size = iv.size();
  Eigen::VectorXd evals(size);
  Mat evecs;
  if (params.eps == 0.0) {
    // Diagonal operator: sorted diagonal and unit vectors, exactly.
    std::vector<int> order(size);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&h](int a, int b) { return std::real(h(a, a)) < std::real(h(b, b)); });
    evecs = Mat::Zero(size, size);
    for (int j = 0; j < size; ++j) {
      evals(j) = std::real(h(order[j], order[j]));
      evecs(order[j], j) = T(1.0);
    }
    refine = false;
  } else {
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigensystem: eigensolver failed");
    evals = es.eigenvalues();
    evecs = es.eigenvectors();
  }
  const int N = static_cast<int>(iv.last);

  EigenReport r;
  r.interval = iv;
  r.x = x;
  r.vectors.resize(size, size);
  BandLU<T> lu;
  std::vector<T> work(size);
  for (int j = 0; j < size; ++j) {
    const double lambda = evals(j);
    Vec v = evecs.col(j);
    if (refine) {
      fill_h_band<T>(params, x, iv, lambda - params.E, lu);
      lu.factor();
      if (!lu.singular()) {
        for (int step = 0; step < kRefineSteps; ++step) {
          for (int i = 0; i < size; ++i) work[i] = v(i);
          lu.solve_in_place(work);
          Vec y(size);
          for (int i = 0; i < size; ++i) y(i) = work[i];
          const double norm = y.norm();
          if (!std::isfinite(norm) || norm == 0.0) break;
          v = y / norm;
        }
      }
    }
    v.normalize();
    Eigen::Index big = 0;
    v.cwiseAbs().maxCoeff(&big);
    const T phase = v(big) / std::abs(v(big));
    v /= phase;

    r.energies.push_back(lambda);
    const Vec res = h * v - lambda * v;
    r.residuals.push_back(res.norm());
    r.max_scaled_residual = std::max(r.max_scaled_residual, r.residuals.back() / (1.0 + std::abs(lambda)));
    r.in_cap.push_back(std::abs(lambda) <= params.C0 ? 1 : 0);
    for (int i = 0; i < size; ++i) r.vectors(i, j) = v(i);

    std::vector<double> mags(size);
    for (int i = 0; i < size; ++i) mags[i] = std::abs(v(i));
    const VectorDecay d = vector_decay_fit(mags, iv.first, N / 2);
    r.decay_rates.push_back(d.rate);
    r.mass_center.push_back(d.center);
    r.tail_floor_fraction.push_back(d.floor_fraction);
  }
  return r;
}

}  // namespace

VectorDecay vector_decay_fit(const std::vector<double>& mags, std::int64_t first_site, std::int64_t inner) {
  VectorDecay out;
  if (mags.empty()) return out;
  std::size_t c = 0;
  for (std::size_t i = 1; i < mags.size(); ++i)
    if (mags[i] > mags[c]) c = i;
  out.center = first_site + static_cast<std::int64_t>(c);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int tail = 0, below = 0;
  for (std::size_t i = 0; i < mags.size(); ++i) {
    const std::int64_t n = first_site + static_cast<std::int64_t>(i);
    if (std::abs(n) < inner) continue;
    ++tail;
    if (!(mags[i] > 1e-300)) {
      ++below;
      continue;
    }
    const double dx = static_cast<double>(std::abs(n - out.center));
    const double dy = std::log(mags[i]);
    sx += dx;
    sy += dy;
    sxx += dx * dx;
    sxy += dx * dy;
    ++out.points;
  }
  out.floor_fraction = tail > 0 ? static_cast<double>(below) / tail : 0.0;
  const double k = out.points;
  const double den = k * sxx - sx * sx;
  if (out.points < 2 || !(den > 0.0)) return out;
  out.rate = -(k * sxy - sx * sy) / den;
  return out;
}

EigenReport eigensystem(const ModelParams& params, double x, int N, bool refine) {
  const Interval iv = symmetric(N);
  require_nonsingular(params, x, iv);
  if (params.symbol.is_real()) return eigensystem_impl<double>(params, x, iv, refine);
  return eigensystem_impl<cplx>(params, x, iv, refine);
}

std::vector<double> window_eigenvalues(const ModelParams& params, double x, int N) {
  const Interval iv = symmetric(N);
  require_nonsingular(params, x, iv);
  Eigen::VectorXd ev;
  if (params.symbol.is_real()) {
    ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(dense_h<double>(params, x, iv), Eigen::EigenvaluesOnly).eigenvalues();
  } else {
    ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(dense_h<cplx>(params, x, iv), Eigen::EigenvaluesOnly).eigenvalues();
  }
  return {ev.data(), ev.data() + ev.size()};
}

double spectral_distance(const ModelParams& params, double x, int N, double E) {
  double best = std::numeric_limits<double>::infinity();
  for (double e : window_eigenvalues(params, x, N)) best = std::min(best, std::abs(E - e));
  return best;
}

ShnolReport shnol_decay_test(const ModelParams& params, double x, double E, const std::vector<int>& ladder,
                             double tolerance) {
  if (ladder.empty()) throw std::invalid_argument("shnol_decay_test: empty ladder");
  ShnolReport r;
  r.ladder = ladder;
  const int core = ladder.front();
  const double weight_rate = params.symbol.rho() / 4.0;

  Eigen::VectorXcd prev;
  std::int64_t prev_first = 0;
  for (std::size_t s = 0; s < ladder.size(); ++s) {
    const EigenReport rep = eigensystem(params, x, ladder[s]);
    const int size = static_cast<int>(rep.energies.size());
    int pick = 0;
    double overlap = 1.0;
    if (s == 0) {
      for (int j = 1; j < size; ++j)
        if (std::abs(rep.energies[j] - E) < std::abs(rep.energies[pick] - E)) pick = j;
      if (!(std::abs(rep.energies[pick] - E) <= tolerance)) {
        r.refused = true;
        return r;
      }
    } else {
      const std::int64_t off = prev_first - rep.interval.first;
      overlap = -1.0;
      for (int j = 0; j < size; ++j) {
        const cplx ip = rep.vectors.col(j).segment(off, prev.size()).dot(prev);
        const double o = std::abs(ip) / prev.norm();
        if (o > overlap) {
          overlap = o;
          pick = j;
        }
      }
      if (overlap < 0.9) r.ambiguous = true;
    }
    const Eigen::VectorXcd v = rep.vectors.col(pick);
    const cplx at_center = v(rep.mass_center[pick] - rep.interval.first);
    double sup = 0.0;
    for (std::int64_t n = -core; n <= core; ++n) {
      const double a = std::abs(v(n - rep.interval.first) / at_center);
      sup = std::max(sup, a * std::exp(weight_rate * std::abs(n)));
    }
    r.energies.push_back(rep.energies[pick]);
    r.overlaps.push_back(overlap);
    r.weighted_sups.push_back(sup);
    prev = v;
    prev_first = rep.interval.first;
  }
  const auto [lo, hi] = std::minmax_element(r.weighted_sups.begin(), r.weighted_sups.end());
  r.sup_ratio = *hi / *lo;
  r.bounded = std::isfinite(*hi) && r.sup_ratio <= 10.0;
  r.pass = !r.refused && !r.ambiguous && r.bounded;
  return r;
}

namespace {

OrbitHitReport finish_hits(std::int64_t count, std::int64_t N1) {
  OrbitHitReport r;
  r.count = count;
  r.N1 = N1;
  r.exponent = count > 0 ? std::log(static_cast<double>(count)) / std::log(static_cast<double>(N1)) : 0.0;
  r.pass = r.exponent < 1.0 - r.delta_min;
  return r;
}

}  // namespace

OrbitHitReport orbit_hit_count(const std::vector<TorusInterval>& bad_set, double x0, double omega, std::int64_t N1) {
  if (N1 < 2) throw std::invalid_argument("orbit_hit_count: N1 must be >= 2");
  std::int64_t count = 0;
  for (std::int64_t k = 1; k <= N1; ++k) {
    const double p = torus_reduce(orbit_phase(x0, k, omega));
    for (const TorusInterval& iv : bad_set) {
      if (p >= iv.lo && p < iv.hi) {
        ++count;
        break;
      }
    }
  }
  return finish_hits(count, N1);
}

OrbitHitReport orbit_hit_count_sorted(const std::vector<TorusInterval>& bad_set, double x0, double omega,
                                      std::int64_t N1) {
  if (N1 < 2) throw std::invalid_argument("orbit_hit_count: N1 must be >= 2");
  std::vector<TorusInterval> sorted = bad_set;
  std::sort(sorted.begin(), sorted.end(), [](const TorusInterval& a, const TorusInterval& b) { return a.lo < b.lo; });
  // Running max of right ends, so overlapping input still answers correctly.
  std::vector<double> reach(sorted.size());
  double m = -1.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) reach[i] = m = std::max(m, sorted[i].hi);
  std::int64_t count = 0;
  for (std::int64_t k = 1; k <= N1; ++k) {
    const double p = torus_reduce(orbit_phase(x0, k, omega));
    auto it = std::upper_bound(sorted.begin(), sorted.end(), p, [](double v, const TorusInterval& iv) { return v < iv.lo; });
    if (it == sorted.begin()) continue;
    const std::size_t idx = static_cast<std::size_t>(it - sorted.begin()) - 1;
    if (p < reach[idx]) {
      // reach[idx] may come from an earlier interval that still covers p.
      bool hit = false;
      for (std::size_t i = idx + 1; i-- > 0;) {
        if (p >= sorted[i].lo && p < sorted[i].hi) {
          hit = true;
          break;
        }
        if (reach[i] <= p) break;
      }
      if (hit) ++count;
    }
  }
  return finish_hits(count, N1);
}

}  // namespace maryland
