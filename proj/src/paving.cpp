#include "maryland/paving.hpp"

#include <cmath>

#include "maryland/greens.hpp"

namespace maryland {

namespace {

double tile_log_margin(const Eigen::MatrixXcd& g, double c0, double offset) {
  double worst = std::numeric_limits<double>::infinity();
  const int n = static_cast<int>(g.rows());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double a = std::abs(g(i, j));
      if (a == 0.0) continue;
      const double bound_log = -c0 * (std::abs(i - j) - offset);
      worst = std::min(worst, bound_log - std::log(a));
    }
  }
  return worst;
}

}  // namespace

bool coverage_holds(const Interval& I, int M, const std::vector<Interval>& tiles) {
  const std::int64_t q = M / 4;
  for (std::int64_t k = I.first; k <= I.last; ++k) {
    const std::int64_t lo = std::max(I.first, k - q);
    const std::int64_t hi = std::min(I.last, k + q);
    bool found = false;
    for (const Interval& t : tiles) {
      if (t.first <= lo && hi <= t.last) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

PavingPlan build_paving(const ModelParams& params, double x, int N, int M) {
  if (M < 16) throw std::invalid_argument("build_paving: M must be >= 16");
  if (N < 4 * M) throw std::invalid_argument("build_paving: N must be >= 4M");
  PavingPlan plan;
  plan.params = params;
  plan.x = x;
  plan.I = {0, N - 1};
  plan.M = M;
  const double c0 = params.c0();
  const double offset = std::pow(params.eps0, 1.0 / 40.0) * M;
  plan.contraction = M * std::exp(-params.symbol.rho() * M / 8.0) * std::exp(c0 * offset);
  plan.contraction_ok = plan.contraction < 0.25;

  std::vector<std::int64_t> starts;
  const int stride = M / 2;
  for (std::int64_t s = 0; s + M < N; s += stride) starts.push_back(s);
  starts.push_back(N - M);

  const int max_abs = max_shift_below_sqrt(M);
  std::vector<Interval> placed;
  plan.all_good = true;
  for (std::int64_t s : starts) {
    Tile t;
    t.base = {s, s + M - 1};
    t.placed = t.base;
    t.worst_log_margin = -std::numeric_limits<double>::infinity();
    for (int m : shift_order(max_abs)) {
      const Interval cand = t.base.shifted(m);
      if (cand.first < plan.I.first || cand.last > plan.I.last) continue;
      t.tried.push_back(m);
      double margin;
      try {
        margin = tile_log_margin(greens_values(params, x, cand), c0, offset);
      } catch (const ResonanceError&) {
        continue;
      }
      if (margin > t.worst_log_margin && !t.good) t.worst_log_margin = margin;
      if (margin > 0.0) {
        t.good = true;
        t.shift = m;
        t.placed = cand;
        t.worst_log_margin = margin;
        break;
      }
    }
    plan.all_good = plan.all_good && t.good;
    placed.push_back(t.placed);
    plan.tiles.push_back(std::move(t));
  }
  plan.coverage_ok = coverage_holds(plan.I, M, placed);
  return plan;
}

PatchedBoundReport patched_bound_check(const PavingPlan& plan) {
  PatchedBoundReport r;
  if (!plan.coverage_ok || !plan.all_good) {
    r.refused = true;
    r.refusal = !plan.coverage_ok ? "coverage condition fails" : "some tile lacks the decay hypothesis";
    return r;
  }
  const ModelParams& p = plan.params;
  const double c0 = p.c0();
  const Eigen::MatrixXcd g = greens_values(p, plan.x, plan.I);
  const int n = static_cast<int>(g.rows());
  r.sup_bound = 2.0 * std::exp(c0 * std::pow(p.eps0, 1.0 / 40.0) * plan.M);
  r.sup = g.cwiseAbs().maxCoeff();
  r.sup_log_slack = std::log(r.sup_bound) - std::log(r.sup);
  r.sup_ok = r.sup < r.sup_bound;

  r.far_log_slack = std::numeric_limits<double>::infinity();
  const double far = n / 10.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int d = std::abs(i - j);
      if (!(d > far)) continue;
      ++r.far_pairs;
      const double a = std::abs(g(i, j));
      if (a == 0.0) continue;
      r.far_log_slack = std::min(r.far_log_slack, -0.5 * c0 * d - std::log(a));
    }
  }
  r.far_ok = r.far_log_slack > 0.0;
  r.pass = r.sup_ok && r.far_ok;
  return r;
}

}  // namespace maryland
