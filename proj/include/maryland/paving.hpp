#pragma once

// Covering a long interval by overlapping short windows whose Green's
// functions decay, then checking the long-interval Green's function directly.

#include <optional>
#include <string>
#include <vector>

#include "maryland/model.hpp"

namespace maryland {

struct Tile {
  Interval base;                 // unshifted tile
  Interval placed;               // base shifted by `shift`
  int shift = 0;
  bool good = false;             // decay hypothesis verified on `placed`
  std::vector<int> tried;        // shifts examined, in scan order
  double worst_log_margin = 0.0; // min over pairs of log bound - log |G| for `placed`
};

struct PavingPlan {
  ModelParams params;
  double x = 0.0;
  Interval I;
  int M = 0;
  std::vector<Tile> tiles;
  bool coverage_ok = false;
  bool all_good = false;
  /// M e^{-rho M / 8} e^{c0 eps0^{1/40} M}; the resolvent iteration contracts when < 1/4.
  double contraction = 0.0;
  bool contraction_ok = false;
};

/// Tiles [0, N) with windows of size M at stride M/2, the last one flush with
/// the end. Each tile tries shifts |m| < sqrt(M) that keep it inside the
/// interval and keeps the first one meeting
/// |G(n1, n2)| < exp(-c0 (|n1 - n2| - eps0^{1/40} M)) for all pairs.
PavingPlan build_paving(const ModelParams& params, double x, int N, int M);

/// Every k in I has a tile containing [k - M/4, k + M/4] ∩ I.
bool coverage_holds(const Interval& I, int M, const std::vector<Interval>& tiles);

struct PatchedBoundReport {
  bool refused = false;
  std::string refusal;
  double sup = 0.0;
  double sup_bound = 0.0;          // 2 e^{c0 eps0^{1/40} M}
  double sup_log_slack = 0.0;      // log sup_bound - log sup
  double far_log_slack = 0.0;      // min over |n1-n2| > N/10 of -c0/2 |n1-n2| - log|G|
  std::int64_t far_pairs = 0;
  bool sup_ok = false;
  bool far_ok = false;
  bool pass = false;
};

PatchedBoundReport patched_bound_check(const PavingPlan& plan);

}  // namespace maryland
