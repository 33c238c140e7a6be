#include <doctest.h>

#include <cmath>
#include <random>

#include "maryland/greens.hpp"
#include "maryland/paving.hpp"

using namespace maryland;

namespace {

ModelParams params_with(double eps, double E) {
  return ModelParams::make(Frequency::golden(), LongRangeSymbol::exp_decay(1.0, 1.0, 0.99), eps, E, 5.0,
                           std::max(eps, 0.01));
}

// Marks, per tile, every k whose clipped quarter-window the tile contains.
bool coverage_by_marking(const Interval& I, int M, const std::vector<Interval>& tiles) {
  const int n = I.size();
  std::vector<char> ok(n, 0);
  for (const auto& t : tiles) {
    for (int i = 0; i < n; ++i) {
      const std::int64_t k = I.first + i;
      const std::int64_t lo = std::max<std::int64_t>(I.first, k - M / 4);
      const std::int64_t hi = std::min<std::int64_t>(I.last, k + M / 4);
      if (t.contains(lo) && t.contains(hi)) ok[i] = 1;
    }
  }
  for (char c : ok)
    if (!c) return false;
  return true;
}

}  // namespace

TEST_CASE("coverage condition against a marking oracle") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    const int M = 16 + static_cast<int>(rng() % 17);
    const int N = 4 * M + static_cast<int>(rng() % 40);
    const Interval I{0, N - 1};
    std::vector<Interval> tiles;
    const int count = 1 + static_cast<int>(rng() % 12);
    for (int j = 0; j < count; ++j) {
      const std::int64_t s = static_cast<std::int64_t>(rng() % (N - M + 1));
      tiles.push_back({s, s + M - 1});
    }
    CHECK(coverage_holds(I, M, tiles) == coverage_by_marking(I, M, tiles));
  }
  // Half-overlapping windows always cover.
  std::vector<Interval> half;
  for (int s = 0; s + 32 <= 128; s += 16) half.push_back({s, s + 31});
  CHECK(coverage_holds({0, 127}, 32, half));
  half.erase(half.begin() + 3);
  CHECK_FALSE(coverage_holds({0, 127}, 32, half));
}

TEST_CASE("paving layout") {
  const auto p = params_with(1e-3, 0.3);
  const auto plan = build_paving(p, 0.17, 256, 32);
  CHECK(plan.tiles.size() == 15);
  CHECK(plan.tiles.front().base.first == 0);
  CHECK(plan.tiles.back().base.last == 255);
  const int max_abs = max_shift_below_sqrt(32);
  CHECK(max_abs == 5);
  for (std::size_t i = 0; i < plan.tiles.size(); ++i) {
    const auto& t = plan.tiles[i];
    CHECK(t.base.size() == 32);
    CHECK(t.placed.size() == 32);
    CHECK(t.placed.first >= 0);
    CHECK(t.placed.last <= 255);
    CHECK(std::abs(t.shift) <= max_abs);
    CHECK(t.placed == t.base.shifted(t.shift));
    REQUIRE_FALSE(t.tried.empty());
    if (i + 1 < plan.tiles.size()) CHECK(t.base.first == 16 * static_cast<std::int64_t>(i));
  }
  // The first tile sits at the left edge, so negative shifts are skipped.
  for (int m : plan.tiles.front().tried) CHECK(m >= 0);
  const double expect = 32 * std::exp(-32.0 / 8.0) * std::exp(0.5 * std::pow(0.01, 1.0 / 40.0) * 32);
  CHECK(plan.contraction == doctest::Approx(expect).epsilon(1e-12));
  CHECK_FALSE(plan.contraction_ok);

  CHECK_THROWS(build_paving(p, 0.17, 100, 32));
  CHECK_THROWS(build_paving(p, 0.17, 256, 8));
}

TEST_CASE("tile goodness matches a direct check") {
  const auto p = params_with(1e-3, 0.3);
  const auto plan = build_paving(p, 0.61, 128, 16);
  const double offset = std::pow(p.eps0, 1.0 / 40.0) * 16;
  for (const auto& t : plan.tiles) {
    if (!t.good) continue;
    const auto w = assemble_window(p, 0.61, t.placed);
    const Eigen::MatrixXcd g = w.h_minus_e.inverse();
    for (int i = 0; i < 16; ++i)
      for (int j = 0; j < 16; ++j) CHECK(std::abs(g(i, j)) < std::exp(-p.c0() * (std::abs(i - j) - offset)));
  }
}

TEST_CASE("patched bound on a small coupling") {
  const auto p = params_with(1e-3, 0.3);
  const auto plan = build_paving(p, 0.17, 128, 16);
  REQUIRE(plan.all_good);
  REQUIRE(plan.coverage_ok);
  const auto r = patched_bound_check(plan);
  CHECK_FALSE(r.refused);
  const auto w = assemble_window(p, 0.17, plan.I);
  const Eigen::MatrixXcd g = w.h_minus_e.inverse();
  CHECK(r.sup == doctest::Approx(g.cwiseAbs().maxCoeff()).epsilon(1e-9));
  CHECK(r.sup_log_slack == doctest::Approx(std::log(r.sup_bound) - std::log(r.sup)));
  CHECK(r.sup_bound == doctest::Approx(2.0 * std::exp(0.5 * std::pow(0.01, 1.0 / 40.0) * 16)));
  std::int64_t pairs = 0;
  for (int i = 0; i < 128; ++i)
    for (int j = 0; j < 128; ++j)
      if (std::abs(i - j) > 12.8) ++pairs;
  CHECK(r.far_pairs == pairs);
  CHECK(r.pass);
}

TEST_CASE("patched bound refuses unverified plans") {
  const auto p = params_with(1e-3, 0.3);
  auto plan = build_paving(p, 0.17, 128, 16);
  plan.all_good = false;
  const auto r = patched_bound_check(plan);
  CHECK(r.refused);
  CHECK_FALSE(r.pass);
  plan.all_good = true;
  plan.coverage_ok = false;
  CHECK(patched_bound_check(plan).refusal == "coverage condition fails");
}
