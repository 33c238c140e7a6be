#include "maryland/ldt.hpp"

#include <cmath>

#include "maryland/parallel.hpp"

namespace maryland {

double u_from_log_det(double log_abs, int N) {
  const double floor_log = -N * std::log(10.0);
  if (log_abs == -std::numeric_limits<double>::infinity()) return floor_log / N;
  const double hi = std::max(log_abs, floor_log);
  const double lo = std::min(log_abs, floor_log);
  return (hi + std::log1p(std::exp(lo - hi))) / N;
}

UEvaluator::UEvaluator(const ModelParams& params, int N) : params_(&params), n_(N), real_(params.symbol.is_real()) {
  if (N < 1) throw std::invalid_argument("UEvaluator: N must be >= 1");
}

double UEvaluator::log_abs_det_b(double x) {
  const Interval iv{0, n_ - 1};
  if (real_) {
    fill_b_band<double>(*params_, x, iv, real_lu_);
    real_lu_.factor();
    return real_lu_.log_det().log_abs;
  }
  fill_b_band<cplx>(*params_, x, iv, complex_lu_);
  complex_lu_.factor();
  return complex_lu_.log_det().log_abs;
}

double u_function(const ModelParams& params, int N, double x) {
  UEvaluator u(params, N);
  return u(x);
}

std::vector<double> fejer_weights(int M) {
  if (M < 1) throw std::invalid_argument("fejer_weights: M must be >= 1");
  std::vector<double> w(2 * M - 1);
  const double m2 = static_cast<double>(M) * M;
  for (int m = -(M - 1); m <= M - 1; ++m) w[m + M - 1] = (M - std::abs(m)) / m2;
  return w;
}

double fejer_average(const UFunction& u, double x, const Frequency& freq, int M) {
  const std::vector<double> w = fejer_weights(M);
  double acc = 0.0;
  for (int m = -(M - 1); m <= M - 1; ++m) acc += w[m + M - 1] * u(orbit_phase(x, m, freq.omega));
  return acc;
}

std::vector<double> torus_grid(int G) {
  if (G < 1) throw std::invalid_argument("torus_grid: G must be >= 1");
  std::vector<double> x(G);
  for (int i = 0; i < G; ++i) x[i] = (i + 0.5) / G;
  return x;
}

double subharmonic_bound(const ModelParams& params) {
  return std::max(std::log(params.symbol.l1_norm() + 1.0 + params.C0) + kPi, std::log(10.0));
}

double mean_lower_bound(const ModelParams& params) {
  return 0.5 * std::log1p(params.E * params.E) - std::log(2.0) + std::log1p(-params.eps * params.symbol.l1_norm());
}

std::vector<cplx> grid_fourier(const std::vector<double>& values, int k_max) {
  const int G = static_cast<int>(values.size());
  if (k_max < 0 || 4 * static_cast<std::int64_t>(k_max) > G) throw std::invalid_argument("grid_fourier: need 0 <= k_max <= G/4");
  // k x_j = k (2j + 1) / (2G): one twiddle table of size 2G covers every term.
  const std::int64_t period = 2 * static_cast<std::int64_t>(G);
  std::vector<cplx> tw(period);
  for (std::int64_t t = 0; t < period; ++t) {
    const PiTrig p = trig_pi(static_cast<double>(t) / G);
    tw[t] = cplx(p.cos, -p.sin);
  }
  std::vector<cplx> out(k_max + 1);
  for (int k = 0; k <= k_max; ++k) {
    cplx acc{0.0, 0.0};
    std::int64_t idx = k % period;
    const std::int64_t step = (2 * static_cast<std::int64_t>(k)) % period;
    for (int j = 0; j < G; ++j) {
      acc += values[j] * tw[idx];
      idx += step;
      if (idx >= period) idx -= period;
    }
    out[k] = acc / static_cast<double>(G);
  }
  return out;
}

SubharmonicSample sample_function(const UFunction& u, int grid, int k_max, double bound_B, int threads) {
  SubharmonicSample s;
  s.grid = torus_grid(grid);
  s.values.resize(grid);
  parallel_for(grid, threads, [&](int, std::size_t i) { s.values[i] = u(s.grid[i]); });
  s.bound_B = bound_B;
  s.k_max = k_max;
  s.fourier = grid_fourier(s.values, k_max);
  return s;
}

SubharmonicSample sample_u(const ModelParams& params, int N, int grid, int k_max, int threads) {
  const int workers = resolve_threads(threads);
  std::vector<UEvaluator> evals;
  evals.reserve(workers);
  for (int w = 0; w < workers; ++w) evals.emplace_back(params, N);
  SubharmonicSample s;
  s.grid = torus_grid(grid);
  s.values.resize(grid);
  parallel_for(grid, workers, [&](int w, std::size_t i) { s.values[i] = evals[w](s.grid[i]); });
  s.bound_B = subharmonic_bound(params);
  s.k_max = k_max;
  s.fourier = grid_fourier(s.values, k_max);
  s.mean_lower_bound = mean_lower_bound(params);
  return s;
}

MeanEstimate mean_estimate(const SubharmonicSample& sample) {
  if (sample.values.size() < 256) throw std::invalid_argument("mean_estimate: grid must have >= 256 points");
  MeanEstimate m;
  double acc = 0.0;
  for (double v : sample.values) acc += v;
  m.estimate = acc / static_cast<double>(sample.values.size());
  m.lower_bound = sample.mean_lower_bound;
  m.slack = m.estimate - m.lower_bound;
  return m;
}

std::vector<TorusInterval> bad_set_from_flags(const std::vector<std::uint8_t>& flags) {
  const int G = static_cast<int>(flags.size());
  std::vector<TorusInterval> out;
  int i = 0;
  while (i < G) {
    if (!flags[i]) {
      ++i;
      continue;
    }
    int j = i;
    while (j < G && flags[j]) ++j;
    out.push_back({static_cast<double>(i) / G, static_cast<double>(j) / G});
    i = j;
  }
  // A run touching both ends is one interval through 0; it stays split in
  // two pieces so every stored interval is ordered.
  return out;
}

namespace {

void finish_profile(DeviationProfile& p) {
  const std::size_t G = p.v_values.size();
  double acc = 0.0;
  for (double u : p.u_values) acc += u;
  p.u_hat0 = acc / static_cast<double>(G);
  p.bad.assign(G, 0);
  p.bad_count = 0;
  for (std::size_t i = 0; i < G; ++i) {
    if (std::abs(p.v_values[i] - p.u_hat0) > p.threshold) {
      p.bad[i] = 1;
      ++p.bad_count;
    }
  }
  p.bad_fraction = static_cast<double>(p.bad_count) / static_cast<double>(G);
  p.bad_set = bad_set_from_flags(p.bad);
  p.c_tilde_fit = p.bad_fraction > 0.0 ? -std::log(p.bad_fraction) / std::pow(p.M, p.sigma)
                                       : std::numeric_limits<double>::infinity();
}

template <class Eval>
void fill_fejer(DeviationProfile& p, const Frequency& freq, int threads, Eval&& eval_at) {
  const int M = p.M;
  const std::vector<double> w = fejer_weights(M);
  const std::size_t G = p.grid.size();
  p.u_values.assign(G, 0.0);
  p.v_values.assign(G, 0.0);
  parallel_for(G, threads, [&](int worker, std::size_t i) {
    double acc = 0.0;
    for (int m = -(M - 1); m <= M - 1; ++m) {
      const double u = eval_at(worker, orbit_phase(p.grid[i], m, freq.omega));
      if (m == 0) p.u_values[i] = u;
      acc += w[m + M - 1] * u;
    }
    p.v_values[i] = acc;
  });
}

}  // namespace

DeviationProfile deviation_measure(const ModelParams& params, int N, int grid, const DeviationOptions& opts) {
  if (N < 1) throw std::invalid_argument("deviation_measure: N must be >= 1");
  DeviationProfile p;
  p.M = opts.M > 0 ? opts.M : static_cast<int>(std::lround(std::sqrt(static_cast<double>(N))));
  p.sigma = opts.sigma > 0.0 ? opts.sigma : 1.0 / (50.0 * params.freq.A);
  p.threshold = opts.threshold ? *opts.threshold : std::pow(p.M, -p.sigma);
  p.grid = torus_grid(grid);
  const int workers = resolve_threads(opts.threads);
  std::vector<UEvaluator> evals;
  evals.reserve(workers);
  for (int w = 0; w < workers; ++w) evals.emplace_back(params, N);
  fill_fejer(p, params.freq, workers, [&](int w, double x) { return evals[w](x); });
  finish_profile(p);
  return p;
}

DeviationProfile deviation_profile(const UFunction& u, const Frequency& freq, int grid, int M, double sigma,
                                   std::optional<double> threshold, int threads) {
  DeviationProfile p;
  p.M = M;
  p.sigma = sigma;
  p.threshold = threshold ? *threshold : std::pow(M, -sigma);
  p.grid = torus_grid(grid);
  fill_fejer(p, freq, threads, [&](int, double x) { return u(x); });
  finish_profile(p);
  return p;
}

double bad_fraction_at(const DeviationProfile& p, double threshold) {
  std::int64_t count = 0;
  for (double v : p.v_values)
    if (std::abs(v - p.u_hat0) > threshold) ++count;
  return static_cast<double>(count) / static_cast<double>(p.v_values.size());
}

double fejer_kernel_closed(int M, double theta) {
  const double s1 = trig_pi(theta).sin;
  if (s1 == 0.0) return 1.0;
  const double sm = trig_pi(static_cast<double>(M) * torus_reduce(theta)).sin;
  const double r = sm / s1;
  return r * r / (static_cast<double>(M) * M);
}

double fejer_kernel_direct(int M, double theta) {
  const double t = torus_reduce(theta);
  double acc = M;
  for (int m = 1; m < M; ++m) acc += 2.0 * (M - m) * trig_pi(2.0 * torus_reduce(m * t)).cos;
  return acc / (static_cast<double>(M) * M);
}

FejerKernelReport fejer_kernel_bound_check(const Frequency& freq, int M, std::int64_t k_max, bool direct_check) {
  if (k_max < 1) throw std::invalid_argument("fejer_kernel_bound_check: k_max must be >= 1");
  FejerKernelReport r;
  r.M = M;
  r.k_max = k_max;
  r.min_kernel = std::numeric_limits<double>::infinity();
  for (std::int64_t k = 1; k <= k_max; ++k) {
    const double theta = torus_reduce(static_cast<double>(k) * freq.omega);
    const double kern = fejer_kernel_closed(M, theta);
    const double dist = torus_norm(theta);
    const double bound = 1.0 / (1.0 + static_cast<double>(M) * M * dist * dist);
    r.min_kernel = std::min(r.min_kernel, kern);
    r.max_ratio = std::max(r.max_ratio, kern / bound);
    if (direct_check) r.max_closed_vs_direct = std::max(r.max_closed_vs_direct, std::abs(kern - fejer_kernel_direct(M, theta)));
    if (!r.first_violation && (kern >= bound * (1.0 + 1e-12) || kern < 0.0)) r.first_violation = k;
  }
  r.pass = !r.first_violation && (!direct_check || r.max_closed_vs_direct <= 1e-12);
  return r;
}

FourierDecayReport fourier_decay_check(const SubharmonicSample& sample) {
  if (sample.k_max < 64) throw std::invalid_argument("fourier_decay_check: k_max must be >= 64");
  FourierDecayReport r;
  for (int k = 1; k <= sample.k_max; ++k) {
    const double v = k * std::abs(sample.fourier[k]);
    if (v > r.max_k_coeff) {
      r.max_k_coeff = v;
      r.argmax_k = k;
    }
  }
  r.ratio = r.max_k_coeff / sample.bound_B;
  r.pass = r.ratio <= r.constant;
  return r;
}

RefinementReport measure_refinement_check(const SubharmonicSample& sample, double eps0, double eps1) {
  if (!(eps0 > 0.0 && eps1 > 0.0)) throw std::invalid_argument("measure_refinement_check: eps0, eps1 must be positive");
  RefinementReport r;
  double scale = 0.0, acc = 0.0;
  for (double v : sample.values) {
    scale = std::max(scale, std::abs(v));
    acc += v;
  }
  if (scale == 0.0) scale = 1.0;
  const double G = static_cast<double>(sample.values.size());
  const double mean = acc / G / scale;
  r.scale = scale;
  r.bound_normalized = sample.bound_B / scale;
  std::int64_t hyp = 0, lhs = 0;
  const double root = std::sqrt(eps0);
  for (double v : sample.values) {
    const double dev = std::abs(v / scale - mean);
    if (dev > eps0) ++hyp;
    if (dev > root) ++lhs;
  }
  r.hypothesis_measure = hyp / G;
  r.lhs_measure = lhs / G;
  r.hypothesis_ok = r.hypothesis_measure < eps1;
  if (!r.hypothesis_ok) return r;
  const double denom = root + std::sqrt(eps1 * r.bound_normalized / eps0);
  r.c_fit = r.lhs_measure > 0.0 ? -std::log(r.lhs_measure) * denom : std::numeric_limits<double>::infinity();
  r.pass = r.c_fit > 0.0;
  return r;
}

}  // namespace maryland
