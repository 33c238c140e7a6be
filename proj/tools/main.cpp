// maryland: sweep driver and single-job runner.
//
//   maryland sweep --config sweep.cfg
//   maryland ldt --N 64,256 --out run1
//   maryland budget --rho 1

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "maryland/config.hpp"
#include "maryland/model.hpp"
#include "maryland/sweep.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::vector<std::pair<std::string, std::string>> values;
};

void add_config_flags(CLI::App* app, Overrides& o, std::map<std::string, std::string>& flags) {
  app->add_option("--config", o.config_path, "flat key = value config file");
  static const std::vector<std::pair<std::string, std::string>> keys{
      {"omega", "rotation number or 'golden'"},
      {"A", "diophantine exponent"},
      {"rho", "symbol decay rate"},
      {"eps", "coupling"},
      {"eps0", "smallness scale in the predicted bounds"},
      {"E_list", "energies, comma separated"},
      {"N_list", "window sides, comma separated"},
      {"M_rule", "'sqrt' or a fixed Fejer window"},
      {"grid", "torus grid size (power of two)"},
      {"C0", "energy cap"},
      {"seed", "sampling seed"},
      {"threads", "'auto' or a worker count"},
      {"out_dir", "output directory"},
      {"samples", "sampled x per Green's function run"},
      {"sigma", "deviation exponent"}};
  for (const auto& [key, help] : keys) app->add_option("--" + key, flags[key], help);
  app->add_option("--E", flags["E_list"], "alias of --E_list");
  app->add_option("--N", flags["N_list"], "alias of --N_list");
  app->add_option("--M", flags["M_rule"], "alias of --M_rule");
  app->add_option("--out", flags["out_dir"], "alias of --out_dir");
}

maryland::SweepConfig load(const Overrides& o, const std::map<std::string, std::string>& flags,
                           const std::string& job) {
  std::string text;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw maryland::ConfigError("config", 0, "cannot read " + o.config_path);
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  maryland::SweepConfig c = maryland::parse_config(text);
  for (const auto& [key, value] : flags)
    if (!value.empty()) maryland::apply_setting(c, key, value, 0);
  if (!job.empty()) c.jobs = {job};
  maryland::validate(c);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Long-range Maryland model: Green's functions, deviation sets, localization"};
  app.require_subcommand(1);

  Overrides o;
  std::map<std::string, std::string> flags;
  std::string chosen;
  std::vector<std::string> names{"sweep", "greens", "ldt", "dk", "paving", "localize", "orbit"};
  for (const auto& name : names) {
    CLI::App* sub = app.add_subcommand(name, name == "sweep" ? "run every configured job" : "run only the " + name + " job");
    add_config_flags(sub, o, flags);
    sub->callback([&chosen, name] { chosen = name; });
  }
  double budget_rho = 1.0;
  CLI::App* budget = app.add_subcommand("budget", "print the heuristic eps budget for the default symbol");
  budget->add_option("--rho", budget_rho, "symbol decay rate");
  budget->callback([&chosen] { chosen = "budget"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (chosen == "budget") {
      const auto sym = maryland::LongRangeSymbol::exp_decay(budget_rho, budget_rho, 0.99);
      const auto b = maryland::epsilon_budget(budget_rho, sym);
      std::cout << "symbol      " << sym.describe() << "\n"
                << "l1_norm     " << maryland::format_double(sym.l1_norm()) << "\n"
                << "eps_hat     " << maryland::format_double(b.eps_hat) << "\n"
                << "binding     " << b.binding << "\n"
                << "l1_slack    " << maryland::format_double(b.l1_slack) << "\n"
                << "entropy     " << maryland::format_double(b.entropy_slack) << "\n"
                << "empty       " << (b.empty ? "yes" : "no") << "\n";
      return 0;
    }
    const maryland::SweepConfig c = load(o, flags, chosen == "sweep" ? "" : chosen);
    const maryland::SweepResult r = maryland::run_sweep(c);
    std::cout << r.summary_path << (r.exit_code == 0 ? " pass" : " FAIL") << "\n";
    return r.exit_code;
  } catch (const maryland::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
