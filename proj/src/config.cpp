#include "maryland/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace maryland {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

double to_double(const std::string& key, const std::string& v, int line) {
  double out = 0.0;
  const char* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out)) throw ConfigError(key, line, "expected a real number, got '" + v + "'");
  return out;
}

long long to_int(const std::string& key, const std::string& v, int line) {
  long long out = 0;
  const char* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) throw ConfigError(key, line, "expected an integer, got '" + v + "'");
  return out;
}

std::string fmt(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

ConfigError::ConfigError(const std::string& k, int l, const std::string& message)
    : std::runtime_error("config key '" + k + "'" + (l > 0 ? " (line " + std::to_string(l) + ")" : "") + ": " + message),
      key(k),
      line(l) {}

int SweepConfig::window_for(int N) const {
  if (M_rule == "sqrt") return std::max(1, static_cast<int>(std::lround(std::sqrt(static_cast<double>(N)))));
  return std::stoi(M_rule);
}

LongRangeSymbol SweepConfig::symbol() const { return LongRangeSymbol::exp_decay(rho, rho, 0.99); }

ModelParams SweepConfig::params(double E) const {
  Frequency f = Frequency::make(omega, A);
  return ModelParams::make(std::move(f), symbol(), eps, E, C0, eps0);
}

void apply_setting(SweepConfig& c, const std::string& key, const std::string& value, int line) {
  if (value.empty()) throw ConfigError(key, line, "missing value");
  if (key == "omega") {
    if (value == "golden") {
      c.omega_token = value;
    } else {
      const double w = to_double(key, value, line);
      if (!(w > 0.0 && w < 1.0)) throw ConfigError(key, line, "omega must lie in (0, 1)");
      c.omega_token = value;
    }
  } else if (key == "A") {
    c.A = to_double(key, value, line);
    if (!(c.A > 0.0)) throw ConfigError(key, line, "A must be positive");
  } else if (key == "rho") {
    c.rho = to_double(key, value, line);
    if (!(c.rho > 0.0)) throw ConfigError(key, line, "rho must be positive");
  } else if (key == "eps") {
    c.eps = to_double(key, value, line);
    if (!(c.eps >= 0.0)) throw ConfigError(key, line, "eps must be nonnegative");
  } else if (key == "eps0") {
    c.eps0 = to_double(key, value, line);
    if (!(c.eps0 > 0.0)) throw ConfigError(key, line, "eps0 must be positive");
  } else if (key == "E_list") {
    c.E_list.clear();
    for (const auto& s : split_list(value)) c.E_list.push_back(to_double(key, s, line));
    if (c.E_list.empty()) throw ConfigError(key, line, "empty list");
  } else if (key == "N_list") {
    c.N_list.clear();
    for (const auto& s : split_list(value)) {
      const long long n = to_int(key, s, line);
      if (n < 16 || n > 4096) throw ConfigError(key, line, "N must lie in [16, 4096]");
      c.N_list.push_back(static_cast<int>(n));
    }
    if (c.N_list.empty()) throw ConfigError(key, line, "empty list");
  } else if (key == "M_rule") {
    if (value != "sqrt") {
      const long long m = to_int(key, value, line);
      if (m < 1) throw ConfigError(key, line, "M must be positive");
    }
    c.M_rule = value;
  } else if (key == "grid") {
    const long long g = to_int(key, value, line);
    if (g < 4096 || g > (1LL << 24) || (g & (g - 1)) != 0) throw ConfigError(key, line, "grid must be a power of two in [2^12, 2^24]");
    c.grid = static_cast<int>(g);
  } else if (key == "C0") {
    c.C0 = to_double(key, value, line);
    if (!(c.C0 > 0.0)) throw ConfigError(key, line, "C0 must be positive");
  } else if (key == "seed") {
    const long long s = to_int(key, value, line);
    if (s < 0) throw ConfigError(key, line, "seed must be nonnegative");
    c.seed = static_cast<std::uint64_t>(s);
  } else if (key == "threads") {
    if (value == "auto") {
      c.threads = 0;
    } else {
      const long long t = to_int(key, value, line);
      if (t < 1 || t > 1024) throw ConfigError(key, line, "threads must be 'auto' or in [1, 1024]");
      c.threads = static_cast<int>(t);
    }
  } else if (key == "out_dir") {
    c.out_dir = value;
  } else if (key == "jobs") {
    c.jobs.clear();
    for (const auto& s : split_list(value)) {
      if (std::find(known_jobs().begin(), known_jobs().end(), s) == known_jobs().end())
        throw ConfigError(key, line, "unknown job '" + s + "'");
      if (std::find(c.jobs.begin(), c.jobs.end(), s) == c.jobs.end()) c.jobs.push_back(s);
    }
    if (c.jobs.empty()) throw ConfigError(key, line, "empty list");
  } else if (key == "samples") {
    const long long s = to_int(key, value, line);
    if (s < 1 || s > 100000) throw ConfigError(key, line, "samples must lie in [1, 100000]");
    c.samples = static_cast<int>(s);
  } else if (key == "sigma") {
    c.sigma = to_double(key, value, line);
    if (!(c.sigma > 0.0)) throw ConfigError(key, line, "sigma must be positive");
  } else {
    throw ConfigError(key, line, "unknown key");
  }
}

void validate(SweepConfig& c) {
  auto at = [&c](const std::string& key) {
    const auto it = c.key_lines.find(key);
    return it == c.key_lines.end() ? 0 : it->second;
  };
  c.omega = c.omega_token == "golden" ? golden_mean() : to_double("omega", c.omega_token, at("omega"));
  LongRangeSymbol sym;
  try {
    sym = c.symbol();
  } catch (const SymbolError& e) {
    throw ConfigError("rho", at("rho"), e.what());
  }
  if (!(c.eps * sym.l1_norm() < 1.0))
    throw ConfigError("eps", at("eps"), "eps * ||phi_hat||_1 = " + fmt(c.eps * sym.l1_norm()) + " must be < 1");
  if (c.eps0 > 0.0 && c.eps > c.eps0) throw ConfigError("eps0", at("eps0"), "eps must not exceed eps0");
  for (double E : c.E_list)
    if (std::abs(E) > c.C0) throw ConfigError("E_list", at("E_list"), "|E| = " + fmt(std::abs(E)) + " exceeds C0");
  if (c.M_rule != "sqrt") {
    const int m = std::stoi(c.M_rule);
    for (int N : c.N_list)
      if (m > N) throw ConfigError("M_rule", at("M_rule"), "M exceeds N = " + std::to_string(N));
  }
}

SweepConfig parse_config(const std::string& text) {
  SweepConfig c;
  std::stringstream ss(text);
  std::string raw;
  int line = 0;
  while (std::getline(ss, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(body, line, "expected 'key = value'");
    const std::string key = trim(body.substr(0, eq));
    apply_setting(c, key, trim(body.substr(eq + 1)), line);
    c.key_lines[key] = line;
  }
  validate(c);
  return c;
}

std::string render_config(const SweepConfig& c) {
  std::ostringstream os;
  auto join = [](const auto& xs, auto f) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + f(xs[i]);
    return s;
  };
  os << "omega = " << c.omega_token << "\n"
     << "A = " << fmt(c.A) << "\n"
     << "rho = " << fmt(c.rho) << "\n"
     << "eps = " << fmt(c.eps) << "\n";
  if (c.eps0 > 0.0) os << "eps0 = " << fmt(c.eps0) << "\n";
  os << "E_list = " << join(c.E_list, fmt) << "\n"
     << "N_list = " << join(c.N_list, [](int n) { return std::to_string(n); }) << "\n"
     << "M_rule = " << c.M_rule << "\n"
     << "grid = " << c.grid << "\n"
     << "C0 = " << fmt(c.C0) << "\n"
     << "seed = " << c.seed << "\n"
     << "threads = " << (c.threads == 0 ? std::string("auto") : std::to_string(c.threads)) << "\n"
     << "out_dir = " << c.out_dir << "\n"
     << "jobs = " << join(c.jobs, [](const std::string& s) { return s; }) << "\n"
     << "samples = " << c.samples << "\n";
  if (c.sigma > 0.0) os << "sigma = " << fmt(c.sigma) << "\n";
  return os.str();
}

}  // namespace maryland
