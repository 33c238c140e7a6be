#include "maryland/sweep.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>

#include <json.hpp>

#include "maryland/ergodic.hpp"
#include "maryland/greens.hpp"
#include "maryland/ldt.hpp"
#include "maryland/localize.hpp"
#include "maryland/parallel.hpp"
#include "maryland/paving.hpp"

namespace maryland {

using json = nlohmann::ordered_json;

double counter_uniform(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed * 0x9E3779B97F4A7C15ull + index + 0x632BE59BD9B4E019ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  z ^= z >> 31;
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

namespace {

json num(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

std::string short_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

class Csv {
 public:
  Csv(const std::filesystem::path& path, const std::vector<std::string>& header) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    row_strings(header);
  }
  void row_strings(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }
  template <class... Ts>
  void row(const Ts&... cells) {
    row_strings({cell(cells)...});
  }

 private:
  static std::string cell(double v) { return format_double(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(long v) { return std::to_string(v); }
  static std::string cell(long long v) { return std::to_string(v); }
  static std::string cell(bool v) { return v ? "1" : "0"; }
  static std::string cell(const std::string& v) { return v; }
  std::ofstream out_;
};

// Independent sample streams per job.
constexpr std::uint64_t kSaltDk = 0x646b;
constexpr std::uint64_t kSaltPaving = 0x706176;
constexpr std::uint64_t kSaltLocalize = 0x6c6f63;
constexpr std::uint64_t kSaltOrbit = 0x6f7262;

struct RunContext {
  const SweepConfig& config;
  ModelParams params;
  double E;
  int N;
  std::string tag;
  std::filesystem::path dir;
  std::optional<DeviationProfile> profile;

  const DeviationProfile& ldt_profile() {
    if (!profile) {
      DeviationOptions opts;
      opts.M = config.window_for(N);
      opts.sigma = config.sigma;
      opts.threads = config.threads;
      profile = deviation_measure(params, N, config.grid, opts);
    }
    return *profile;
  }
  std::filesystem::path file(const std::string& stem) const { return dir / (stem + "_" + tag + ".csv"); }
};

bool in_set(const std::vector<TorusInterval>& set, double x) {
  const double p = torus_reduce(x);
  for (const auto& iv : set)
    if (p >= iv.lo && p < iv.hi) return true;
  return false;
}

json job_greens(RunContext& ctx) {
  const ModelParams& p = ctx.params;
  const int N = ctx.N;
  const int S = ctx.config.samples;
  const double rate_floor = p.symbol.rho() / 4.0;
  const auto& bad = ctx.ldt_profile().bad_set;

  std::vector<ShiftSearch> found(S);
  parallel_for(S, ctx.config.threads, [&](int, std::size_t i) {
    found[i] = find_good_shift(p, (i + 0.5) / S, N, rate_floor, 0.9);
  });

  Csv csv(ctx.file("greens_shifts"), {"x", "in_bad_set", "m", "rate", "r2", "sup"});
  int considered = 0, good = 0;
  std::optional<std::size_t> profile_index;
  for (int i = 0; i < S; ++i) {
    const double x = (i + 0.5) / S;
    const bool inside = in_set(bad, x);
    const ShiftSearch& s = found[i];
    if (!inside) {
      ++considered;
      if (s.m) {
        ++good;
        if (!profile_index) profile_index = i;
      }
    }
    if (s.m) {
      const ShiftAttempt& a = s.attempts.back();
      csv.row(x, inside, std::to_string(*s.m), a.rate, a.r2, a.sup);
    } else {
      csv.row(x, inside, std::string("none"), std::nan(""), std::nan(""), std::nan(""));
    }
  }
  const double fraction = considered > 0 ? static_cast<double>(good) / considered : 0.0;

  json j;
  j["samples"] = S;
  j["considered"] = considered;
  j["good"] = good;
  j["good_fraction"] = num(fraction);
  j["rate_floor"] = num(rate_floor);
  j["r2_floor"] = 0.9;
  j["max_shift"] = max_shift_below_sqrt(N);
  j["predicted_rate"] = num(p.c0());
  if (profile_index) {
    const double x = (*profile_index + 0.5) / S;
    const int m = *found[*profile_index].m;
    const Eigen::MatrixXcd g = greens_values(p, x, Interval{m, m + N - 1});
    const DecayEstimate d = decay_fit(g, predicted_decay(p, N));
    Csv prof(ctx.file("greens_decay"), {"d", "mean_log_abs_G", "count"});
    for (int k = 0; k < N; ++k) prof.row(k, d.distance_profile[k], d.distance_counts[k]);
    j["decay_x"] = num(x);
    j["decay_m"] = m;
    j["fit_range"] = {N / 4, N - 1};
    j["rate"] = num(d.rate);
    j["offset"] = num(d.offset);
    j["r2"] = num(d.r2);
    j["predicted_offset"] = num(d.predicted_offset);
  }
  j["pass"] = fraction >= 0.9;
  return j;
}

json job_ldt(RunContext& ctx) {
  const DeviationProfile& prof = ctx.ldt_profile();
  Csv csv(ctx.file("ldt"), {"x", "u", "v", "bad_flag"});
  for (std::size_t i = 0; i < prof.grid.size(); ++i)
    csv.row(prof.grid[i], prof.u_values[i], prof.v_values[i], static_cast<int>(prof.bad[i]));

  const int k_max = std::min<int>(512, static_cast<int>(prof.grid.size()) / 4);
  SubharmonicSample sample;
  sample.grid = prof.grid;
  sample.values = prof.u_values;
  sample.bound_B = subharmonic_bound(ctx.params);
  sample.k_max = k_max;
  sample.fourier = grid_fourier(sample.values, k_max);
  sample.mean_lower_bound = mean_lower_bound(ctx.params);
  const MeanEstimate mean = mean_estimate(sample);
  const FourierDecayReport fd = fourier_decay_check(sample);

  json j;
  j["M"] = prof.M;
  j["sigma"] = num(prof.sigma);
  j["threshold"] = num(prof.threshold);
  j["grid"] = static_cast<int>(prof.grid.size());
  j["u_hat0"] = num(prof.u_hat0);
  j["mean_lower_bound"] = num(mean.lower_bound);
  j["mean_slack"] = num(mean.slack);
  j["bad_count"] = prof.bad_count;
  j["bad_fraction"] = num(prof.bad_fraction);
  j["bad_intervals"] = prof.bad_set.size();
  j["c_tilde"] = num(prof.c_tilde_fit);
  j["bound_B"] = num(sample.bound_B);
  j["fourier_k_max"] = k_max;
  j["fourier_max_k_coeff"] = num(fd.max_k_coeff);
  j["fourier_ratio"] = num(fd.ratio);
  j["pass"] = mean.slack >= -2e-3 && fd.pass;
  return j;
}

json job_dk(RunContext& ctx) {
  const ModelParams& p = ctx.params;
  const std::int64_t horizon = ctx.N;
  const AlphaE alpha = alpha_of_E(ctx.E);
  const std::vector<double> kappas{0.01, 0.05, 0.2};
  bool counts_ok = true;
  Csv csv(ctx.file("dk"), {"x", "kappa", "count", "bound_10kN", "two_kappa_N"});
  for (int s = 0; s < 10; ++s) {
    const double x = counter_uniform(ctx.config.seed ^ kSaltDk, s);
    for (double kappa : kappas) {
      const std::int64_t c = near_resonance_count(p.freq, x, alpha, horizon, kappa);
      const double bound = 10.0 * kappa * horizon;
      const double dev = std::abs(static_cast<double>(c) / horizon - 2.0 * kappa);
      counts_ok = counts_ok && c < bound && dev < 5.0 / std::sqrt(static_cast<double>(horizon));
      csv.row(x, kappa, static_cast<long long>(c), bound, 2.0 * kappa * horizon);
    }
  }

  const double eta = p.eps0 * (p.symbol.l1_norm() + 1.0);
  const double x0 = counter_uniform(ctx.config.seed ^ kSaltDk, 0);
  const BirkhoffReport b = birkhoff_log_cos(p.freq, x0, alpha, horizon, eta);
  Csv bcsv(ctx.file("dk_birkhoff"), {"N", "discrepancy"});
  for (std::size_t i = 0; i < b.ladder.size(); ++i) bcsv.row(static_cast<long long>(b.ladder[i]), b.ladder_discrepancy[i]);

  const SingularIntegralReport si = singular_integral_check();
  Csv scsv(ctx.file("dk_singular"), {"eta", "integral", "ratio", "c_running"});
  for (std::size_t i = 0; i < si.etas.size(); ++i) scsv.row(si.etas[i], si.integrals[i], si.ratios[i], si.c_running[i]);

  json j;
  j["horizon"] = horizon;
  j["alpha"] = num(alpha.alpha);
  j["counts_ok"] = counts_ok;
  j["birkhoff_eta"] = num(eta);
  j["birkhoff_x"] = num(x0);
  j["birkhoff_integral"] = num(b.integral);
  j["birkhoff_discrepancy"] = num(b.discrepancy);
  j["delta_hat"] = num(b.delta_hat);
  j["singular_C"] = num(si.c_fit);
  j["singular_C_spread"] = num(si.c_spread);
  j["singular_loglog_slope"] = num(si.loglog_slope);
  j["lebesgue_ok"] = si.lebesgue_ok;
  j["pass"] = counts_ok && b.delta_hat > 0.0 && si.bound_ok && si.stable && si.lebesgue_ok;
  return j;
}

json job_paving(RunContext& ctx) {
  const int N = ctx.N;
  const int M = std::max(16, static_cast<int>(std::lround(std::sqrt(static_cast<double>(N)))));
  if (N < 4 * M) throw std::invalid_argument("paving needs N >= 4M (M = " + std::to_string(M) + ")");
  const int draws = 10;
  std::vector<PavingPlan> plans(draws);
  std::vector<PatchedBoundReport> reps(draws);
  parallel_for(draws, ctx.config.threads, [&](int, std::size_t i) {
    const double x = counter_uniform(ctx.config.seed ^ kSaltPaving, i);
    plans[i] = build_paving(ctx.params, x, N, M);
    reps[i] = patched_bound_check(plans[i]);
  });
  Csv csv(ctx.file("paving"), {"x", "tiles", "good_tiles", "coverage_ok", "refused", "sup", "sup_bound", "sup_log_slack",
                               "far_log_slack", "pass"});
  int accepted = 0, passed = 0;
  for (int i = 0; i < draws; ++i) {
    int good = 0;
    for (const Tile& t : plans[i].tiles) good += t.good ? 1 : 0;
    const PatchedBoundReport& r = reps[i];
    if (!r.refused) {
      ++accepted;
      if (r.pass) ++passed;
    }
    csv.row(plans[i].x, static_cast<int>(plans[i].tiles.size()), good, plans[i].coverage_ok, r.refused, r.sup, r.sup_bound,
            r.sup_log_slack, r.far_log_slack, r.pass);
  }
  json j;
  j["M"] = M;
  j["draws"] = draws;
  j["accepted"] = accepted;
  j["passed"] = passed;
  j["contraction"] = num(plans.front().contraction);
  j["contraction_ok"] = plans.front().contraction_ok;
  j["pass"] = passed == accepted;
  return j;
}

json job_localize(RunContext& ctx) {
  const ModelParams& p = ctx.params;
  const int N = ctx.N;
  std::optional<EigenReport> rep;
  for (std::uint64_t s = 0; s < 64 && !rep; ++s) {
    try {
      rep = eigensystem(p, counter_uniform(ctx.config.seed ^ kSaltLocalize, s), N);
    } catch (const SingularWindowError&) {
    }
  }
  if (!rep) throw std::runtime_error("localize: no nonsingular window found");
  const double rate_floor = p.symbol.rho() / 4.0;
  Csv csv(ctx.file("localize"), {"energy", "decay_rate", "mass_center", "in_cap", "residual", "tail_floor_fraction"});
  int in_cap = 0, good = 0;
  double trace = 0.0, diag = 0.0;
  for (std::size_t j = 0; j < rep->energies.size(); ++j) {
    csv.row(rep->energies[j], rep->decay_rates[j], static_cast<long long>(rep->mass_center[j]), rep->in_cap[j] != 0,
            rep->residuals[j], rep->tail_floor_fraction[j]);
    trace += rep->energies[j];
    if (rep->in_cap[j]) {
      ++in_cap;
      if (rep->decay_rates[j] >= rate_floor) ++good;
    }
  }
  for (std::int64_t n = -N; n <= N; ++n) {
    const PiTrig t = trig_pi(orbit_phase(rep->x, n, p.freq.omega));
    diag += t.sin / t.cos;
  }
  diag += (2.0 * N + 1.0) * (p.eps * p.symbol(0)).real();
  const double trace_err = std::abs(trace - diag) / std::max(1.0, std::abs(diag));
  const double fraction = in_cap > 0 ? static_cast<double>(good) / in_cap : 0.0;
  json j;
  j["x"] = num(rep->x);
  j["window"] = {-N, N};
  j["in_cap"] = in_cap;
  j["good"] = good;
  j["good_fraction"] = num(fraction);
  j["rate_floor"] = num(rate_floor);
  j["trace_rel_error"] = num(trace_err);
  j["max_scaled_residual"] = num(rep->max_scaled_residual);
  j["pass"] = fraction >= 0.8 && trace_err <= 1e-8 && rep->max_scaled_residual <= 1e-8;
  return j;
}

json job_orbit(RunContext& ctx) {
  const DeviationProfile& prof = ctx.ldt_profile();
  const double x0 = counter_uniform(ctx.config.seed ^ kSaltOrbit, 0);
  const std::int64_t N1 = 100000;
  const OrbitHitReport r = orbit_hit_count(prof.bad_set, x0, ctx.params.freq.omega, N1);
  const OrbitHitReport r2 = orbit_hit_count_sorted(prof.bad_set, x0, ctx.params.freq.omega, N1);
  Csv csv(ctx.file("orbit"), {"lo", "hi"});
  for (const auto& iv : prof.bad_set) csv.row(iv.lo, iv.hi);
  json j;
  j["x0"] = num(x0);
  j["N1"] = N1;
  j["bad_measure"] = num(prof.bad_fraction);
  j["count"] = r.count;
  j["expected"] = num(prof.bad_fraction * N1);
  j["exponent"] = num(r.exponent);
  j["methods_agree"] = r.count == r2.count;
  j["pass"] = r.pass && r.count == r2.count;
  return j;
}

}  // namespace

SweepResult run_sweep(const SweepConfig& config) {
  const std::filesystem::path dir(config.out_dir);
  std::filesystem::create_directories(dir);

  static const std::map<std::string, std::function<json(RunContext&)>> jobs{
      {"greens", job_greens}, {"ldt", job_ldt},           {"dk", job_dk},
      {"paving", job_paving}, {"localize", job_localize}, {"orbit", job_orbit}};

  json summary;
  summary["version"] = "0.1.0";
  json cfg;
  cfg["omega"] = num(config.omega);
  cfg["A"] = num(config.A);
  cfg["rho"] = num(config.rho);
  cfg["eps"] = num(config.eps);
  cfg["C0"] = num(config.C0);
  cfg["grid"] = config.grid;
  cfg["seed"] = config.seed;
  cfg["M_rule"] = config.M_rule;
  cfg["samples"] = config.samples;
  cfg["jobs"] = config.jobs;
  summary["config"] = cfg;

  bool all_pass = true;
  json runs = json::array();
  for (double E : config.E_list) {
    for (int N : config.N_list) {
      RunContext ctx{config, config.params(E), E, N, "E" + short_double(E) + "_N" + std::to_string(N), dir, {}};
      json run;
      run["E"] = num(E);
      run["N"] = N;
      run["eps0"] = num(ctx.params.eps0);
      json results;
      // Fixed job order, independent of the order given in the config.
      for (const std::string& name : known_jobs()) {
        if (std::find(config.jobs.begin(), config.jobs.end(), name) == config.jobs.end()) continue;
        json r;
        try {
          r = jobs.at(name)(ctx);
        } catch (const std::exception& e) {
          r = json::object();
          r["error"] = e.what();
          r["pass"] = false;
        }
        all_pass = all_pass && r["pass"].get<bool>();
        results[name] = r;
      }
      run["jobs"] = results;
      runs.push_back(run);
    }
  }
  summary["runs"] = runs;
  summary["pass"] = all_pass;

  SweepResult out;
  out.summary_path = (dir / "summary.json").string();
  std::ofstream f(out.summary_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + out.summary_path);
  f << summary.dump(2) << '\n';
  out.exit_code = all_pass ? 0 : 1;
  return out;
}

}  // namespace maryland
