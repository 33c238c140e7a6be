#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "maryland/config.hpp"
#include "maryland/determinant.hpp"
#include "maryland/ergodic.hpp"
#include "maryland/greens.hpp"
#include "maryland/ldt.hpp"
#include "maryland/localize.hpp"
#include "maryland/paving.hpp"
#include "maryland/sweep.hpp"

namespace py = pybind11;
using namespace maryland;

namespace {

Interval as_interval(std::pair<std::int64_t, std::int64_t> iv) { return {iv.first, iv.second}; }
std::pair<std::int64_t, std::int64_t> as_pair(const Interval& iv) { return {iv.first, iv.last}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Long-range Maryland model numerics";

  py::register_exception<SymbolError>(m, "SymbolError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ResonanceError>(m, "ResonanceError", PyExc_ArithmeticError);
  py::register_exception<SingularWindowError>(m, "SingularWindowError", PyExc_ArithmeticError);
  py::register_exception<OracleScopeError>(m, "OracleScopeError", PyExc_ValueError);

  m.def("torus_norm", &torus_norm);
  m.def("golden_mean", &golden_mean);
  m.def("dc_constant", &dc_constant, py::arg("freq"), py::arg("K"), py::arg("A"));

  py::class_<Frequency>(m, "Frequency")
      .def_static("make", &Frequency::make, py::arg("omega"), py::arg("A") = 2.0, py::arg("cf_depth") = 20)
      .def_static("golden", &Frequency::golden, py::arg("A") = 2.0)
      .def_readonly("omega", &Frequency::omega)
      .def_readonly("A", &Frequency::A)
      .def_readonly("cf", &Frequency::cf)
      .def("__repr__", [](const Frequency& f) { return "Frequency(omega=" + std::to_string(f.omega) + ")"; });

  py::class_<LongRangeSymbol>(m, "LongRangeSymbol")
      .def_static("exp_decay", &LongRangeSymbol::exp_decay, py::arg("rho"), py::arg("rate"), py::arg("margin"))
      .def_static("nearest_neighbor", &LongRangeSymbol::nearest_neighbor, py::arg("rho"), py::arg("scale") = -1.0)
      .def_static("explicit_list", &LongRangeSymbol::explicit_list, py::arg("rho"), py::arg("coeffs"))
      .def("__call__", &LongRangeSymbol::operator())
      .def_property_readonly("rho", &LongRangeSymbol::rho)
      .def_property_readonly("radius", &LongRangeSymbol::radius)
      .def_property_readonly("l1_norm", &LongRangeSymbol::l1_norm)
      .def_property_readonly("is_real", &LongRangeSymbol::is_real)
      .def("__repr__", &LongRangeSymbol::describe);

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init(&ModelParams::make), py::arg("freq"), py::arg("symbol"), py::arg("eps"), py::arg("E"),
           py::arg("C0") = 5.0, py::arg("eps0") = -1.0)
      .def_readonly("freq", &ModelParams::freq)
      .def_readonly("symbol", &ModelParams::symbol)
      .def_readonly("eps", &ModelParams::eps)
      .def_readonly("E", &ModelParams::E)
      .def_readonly("C0", &ModelParams::C0)
      .def_readonly("eps0", &ModelParams::eps0)
      .def("with_energy", &ModelParams::with_energy);

  py::class_<EpsilonBudget>(m, "EpsilonBudget")
      .def_readonly("eps_hat", &EpsilonBudget::eps_hat)
      .def_readonly("binding", &EpsilonBudget::binding)
      .def_readonly("l1_slack", &EpsilonBudget::l1_slack)
      .def_readonly("entropy_slack", &EpsilonBudget::entropy_slack)
      .def_readonly("empty", &EpsilonBudget::empty);
  m.def("epsilon_budget", &epsilon_budget, py::arg("rho"), py::arg("symbol"));

  m.def(
      "b_matrix",
      [](const ModelParams& p, double x, std::pair<std::int64_t, std::int64_t> iv) {
        return assemble_window(p, x, as_interval(iv)).b_matrix;
      },
      py::arg("params"), py::arg("x"), py::arg("interval"));
  m.def(
      "log_abs_det_b",
      [](const ModelParams& p, int N, double x) {
        UEvaluator ev(p, N);
        return ev.log_abs_det_b(x);
      },
      py::arg("params"), py::arg("N"), py::arg("x"));
  m.def("u_function", &u_function, py::arg("params"), py::arg("N"), py::arg("x"));

  py::class_<DetIdentityReport>(m, "DetIdentityReport")
      .def_readonly("log_lhs", &DetIdentityReport::log_lhs)
      .def_readonly("log_rhs", &DetIdentityReport::log_rhs)
      .def_readonly("discrepancy", &DetIdentityReport::discrepancy)
      .def_readonly("bound_holds", &DetIdentityReport::bound_holds)
      .def_readonly("identity_ok", &DetIdentityReport::identity_ok);
  m.def("det_identity_check", &det_identity_check, py::arg("params"), py::arg("N"));

  py::class_<JensenReport>(m, "JensenReport")
      .def_readonly("circle_mean", &JensenReport::circle_mean)
      .def_readonly("log_det_at_zero", &JensenReport::log_det_at_zero)
      .def_readonly("slack", &JensenReport::slack)
      .def_readonly("pass_", &JensenReport::pass);
  m.def("jensen_check", &jensen_check, py::arg("params"), py::arg("N"), py::arg("quad_points"));

  m.def(
      "greens_values",
      [](const ModelParams& p, double x, std::pair<std::int64_t, std::int64_t> iv) {
        return greens_values(p, x, as_interval(iv));
      },
      py::arg("params"), py::arg("x"), py::arg("interval"));

  py::class_<DecayEstimate>(m, "DecayEstimate")
      .def_readonly("rate", &DecayEstimate::rate)
      .def_readonly("offset", &DecayEstimate::offset)
      .def_readonly("r2", &DecayEstimate::r2)
      .def_readonly("predicted_rate", &DecayEstimate::predicted_rate)
      .def_readonly("distance_profile", &DecayEstimate::distance_profile);
  m.def(
      "decay_fit",
      [](const ModelParams& p, const Eigen::MatrixXcd& g) { return decay_fit(g, predicted_decay(p, static_cast<int>(g.rows()))); },
      py::arg("params"), py::arg("G"));

  py::class_<ShiftSearch>(m, "ShiftSearch")
      .def_readonly("m", &ShiftSearch::m)
      .def_readonly("estimate", &ShiftSearch::estimate)
      .def_readonly("sup_bound", &ShiftSearch::sup_bound);
  m.def("find_good_shift", &find_good_shift, py::arg("params"), py::arg("x"), py::arg("N"), py::arg("rate_floor"),
        py::arg("r2_floor") = 0.0);

  py::class_<SubharmonicSample>(m, "SubharmonicSample")
      .def_readonly("grid", &SubharmonicSample::grid)
      .def_readonly("values", &SubharmonicSample::values)
      .def_readonly("bound_B", &SubharmonicSample::bound_B)
      .def_readonly("fourier", &SubharmonicSample::fourier)
      .def_readonly("mean_lower_bound", &SubharmonicSample::mean_lower_bound);
  m.def("sample_u", &sample_u, py::arg("params"), py::arg("N"), py::arg("grid"), py::arg("k_max"),
        py::arg("threads") = 0);
  m.def("fejer_weights", &fejer_weights, py::arg("M"));
  m.def("fejer_kernel", &fejer_kernel_closed, py::arg("M"), py::arg("theta"));

  py::class_<DeviationProfile>(m, "DeviationProfile")
      .def_readonly("M", &DeviationProfile::M)
      .def_readonly("threshold", &DeviationProfile::threshold)
      .def_readonly("u_hat0", &DeviationProfile::u_hat0)
      .def_readonly("v_values", &DeviationProfile::v_values)
      .def_readonly("bad_fraction", &DeviationProfile::bad_fraction)
      .def_readonly("c_tilde_fit", &DeviationProfile::c_tilde_fit)
      .def_property_readonly("bad_set", [](const DeviationProfile& d) {
        std::vector<std::pair<double, double>> out;
        for (const auto& iv : d.bad_set) out.emplace_back(iv.lo, iv.hi);
        return out;
      })
      .def("bad_fraction_at", &bad_fraction_at);
  m.def(
      "deviation_measure",
      [](const ModelParams& p, int N, int grid, int M, std::optional<double> threshold, int threads) {
        DeviationOptions o;
        o.M = M;
        o.threshold = threshold;
        o.threads = threads;
        py::gil_scoped_release release;
        return deviation_measure(p, N, grid, o);
      },
      py::arg("params"), py::arg("N"), py::arg("grid"), py::arg("M") = 0, py::arg("threshold") = py::none(),
      py::arg("threads") = 0);

  m.def(
      "near_resonance_count",
      [](const Frequency& f, double x, double E, std::int64_t N, double kappa) {
        return near_resonance_count(f, x, alpha_of_E(E), N, kappa);
      },
      py::arg("freq"), py::arg("x"), py::arg("E"), py::arg("N"), py::arg("kappa"));
  m.def("singular_integral", [](double eta) { return singular_integral(eta); }, py::arg("eta"));
  m.def("log_cos_integral", &log_cos_integral, py::arg("eta"));

  py::class_<PatchedBoundReport>(m, "PatchedBoundReport")
      .def_readonly("refused", &PatchedBoundReport::refused)
      .def_readonly("sup", &PatchedBoundReport::sup)
      .def_readonly("sup_bound", &PatchedBoundReport::sup_bound)
      .def_readonly("far_log_slack", &PatchedBoundReport::far_log_slack)
      .def_readonly("pass_", &PatchedBoundReport::pass);
  py::class_<PavingPlan>(m, "PavingPlan")
      .def_readonly("all_good", &PavingPlan::all_good)
      .def_readonly("coverage_ok", &PavingPlan::coverage_ok)
      .def_readonly("contraction", &PavingPlan::contraction)
      .def_property_readonly("tiles", [](const PavingPlan& p) {
        std::vector<std::pair<std::int64_t, std::int64_t>> out;
        for (const auto& t : p.tiles) out.push_back(as_pair(t.placed));
        return out;
      })
      .def("check", &patched_bound_check);
  m.def("build_paving", &build_paving, py::arg("params"), py::arg("x"), py::arg("N"), py::arg("M"));

  py::class_<EigenReport>(m, "EigenReport")
      .def_readonly("energies", &EigenReport::energies)
      .def_readonly("vectors", &EigenReport::vectors)
      .def_readonly("decay_rates", &EigenReport::decay_rates)
      .def_readonly("mass_center", &EigenReport::mass_center)
      .def_readonly("max_scaled_residual", &EigenReport::max_scaled_residual);
  m.def("eigensystem", &eigensystem, py::arg("params"), py::arg("x"), py::arg("N"), py::arg("refine") = true);

  m.def(
      "orbit_hit_count",
      [](const std::vector<std::pair<double, double>>& set, double x0, double omega, std::int64_t N1) {
        std::vector<TorusInterval> s;
        for (const auto& [lo, hi] : set) s.push_back({lo, hi});
        return orbit_hit_count_sorted(s, x0, omega, N1).count;
      },
      py::arg("bad_set"), py::arg("x0"), py::arg("omega"), py::arg("N1"));

  m.def(
      "run_sweep",
      [](const std::string& config_text, const std::string& out_dir) {
        SweepConfig c = parse_config(config_text);
        if (!out_dir.empty()) c.out_dir = out_dir;
        py::gil_scoped_release release;
        const auto r = run_sweep(c);
        return std::make_pair(r.exit_code, r.summary_path);
      },
      py::arg("config_text"), py::arg("out_dir") = "");
}
