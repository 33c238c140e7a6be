#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "maryland/config.hpp"
#include "maryland/sweep.hpp"

using namespace maryland;
namespace fs = std::filesystem;

namespace {

std::map<std::string, std::string> read_tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    out[fs::relative(e.path(), root).string()] = ss.str();
  }
  return out;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("maryland_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("config defaults") {
  const auto c = parse_config("");
  CHECK(c.omega == doctest::Approx(golden_mean()).epsilon(1e-16));
  CHECK(c.A == 2.0);
  CHECK(c.rho == 1.0);
  CHECK(c.eps == 0.01);
  CHECK(c.E_list == std::vector<double>{0.0});
  CHECK(c.N_list == std::vector<int>{64});
  CHECK(c.M_rule == "sqrt");
  CHECK(c.grid == 16384);
  CHECK(c.C0 == 5.0);
  CHECK(c.seed == 42);
  CHECK(c.jobs.size() == 6);
  CHECK(c.window_for(64) == 8);
  CHECK(c.window_for(256) == 16);
  CHECK(c.params(0.0).eps0 == 0.01);
}

TEST_CASE("config parsing") {
  const auto c = parse_config("# comment\nE_list = 0, 1.5 ,-3\nN_list=16,32\n\nM_rule = 4  # trailing\nthreads = 2\n");
  CHECK(c.E_list == std::vector<double>{0.0, 1.5, -3.0});
  CHECK(c.N_list == std::vector<int>{16, 32});
  CHECK(c.window_for(32) == 4);
  CHECK(c.threads == 2);
  CHECK(c.key_lines.at("N_list") == 3);

  const auto round = parse_config(render_config(c));
  CHECK(round.E_list == c.E_list);
  CHECK(round.N_list == c.N_list);
  CHECK(round.M_rule == c.M_rule);
  CHECK(render_config(round) == render_config(c));
}

TEST_CASE("config errors name the key and line") {
  try {
    parse_config("rho = 1\neps = 0.9\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key == "eps");
    CHECK(e.line == 2);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config("bogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("grid = 1000\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("E_list = 6\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("N_list = 16,x\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("jobs = greens,unknown\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("no equals sign\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("eps = nan\n"), ConfigError);
}

TEST_CASE("format_double and counter_uniform") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0 / 0.0) == "inf");
  CHECK(format_double(-1.0 / 0.0) == "-inf");
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const double u = counter_uniform(7, i);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(u == counter_uniform(7, i));
  }
  CHECK(counter_uniform(7, 1) != counter_uniform(8, 1));
}

TEST_CASE("sweeps are reproducible and thread-count independent") {
  const std::string base = "N_list = 16\nE_list = 0,1\ngrid = 4096\nsamples = 10\njobs = ldt,dk,localize,orbit\n";
  auto run = [&](const std::string& name, int threads) {
    auto c = parse_config(base + "threads = " + std::to_string(threads) + "\n");
    c.out_dir = scratch(name).string();
    const auto r = run_sweep(c);
    CHECK(fs::exists(r.summary_path));
    return read_tree(c.out_dir);
  };
  const auto a = run("a", 1);
  const auto b = run("b", 1);
  const auto c = run("c", 3);
  CHECK(a.size() > 4);
  CHECK(a.count("summary.json") == 1);
  CHECK(a == b);
  // Thread count only enters the recorded config line.
  REQUIRE(a.size() == c.size());
  for (const auto& [k, v] : a) {
    if (k == "summary.json") continue;
    CHECK_MESSAGE(c.at(k) == v, k);
  }
}
