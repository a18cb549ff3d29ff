#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "thetaquench/config.hpp"
#include "thetaquench/errors.hpp"

namespace tq {
namespace {

constexpr std::pair<Mode, std::string_view> kModeNames[] = {
    {Mode::FreePhase, "free-phase"}, {Mode::FreeRate, "free-rate"}, {Mode::FreeNu, "free-nu"},
    {Mode::EdRun, "ed-run"},         {Mode::EdScan, "ed-scan"},
};

const std::set<std::string> kFreeOnly{"theta", "theta_prime", "dtheta", "convention",
                                      "k_min", "k_max",       "k_nodes", "quad_cutoff",
                                      "quad_tol"};
const std::set<std::string> kEdOnly{"sites", "am", "e_over_m", "e_min", "e_max", "e_step", "dense_limit"};
const std::set<std::string> kScanOnly{"e_min", "e_max", "e_step"};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

long parse_integer(std::string_view text, const std::string& key) {
  long v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw ValidationError("config key '" + key + "': expected an integer, got '" + std::string(text) + "'");
  return v;
}

Index count_steps(double span, double step) {
  return static_cast<Index>(std::floor(span / step + 1e-9)) + 1;
}

}  // namespace

std::string_view mode_name(Mode m) {
  for (const auto& [mode, name] : kModeNames)
    if (mode == m) return name;
  return "unknown";
}

Mode parse_mode(std::string_view name) {
  for (const auto& [mode, n] : kModeNames)
    if (n == name) return mode;
  throw ValidationError("unknown mode '" + std::string(name) + "'");
}

bool is_free(Mode m) { return m == Mode::FreePhase || m == Mode::FreeRate || m == Mode::FreeNu; }

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_number(std::string_view text, const std::string& key) {
  std::string_view s = trim(text);
  double factor = 1;
  if (s.size() >= 2 && s.substr(s.size() - 2) == "pi") {
    factor = std::numbers::pi;
    s = trim(s.substr(0, s.size() - 2));
    if (!s.empty() && s.back() == '*') s = trim(s.substr(0, s.size() - 1));
    if (s.empty() || s == "+") return factor;
    if (s == "-") return -factor;
  }
  double v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc() || ptr != end || !std::isfinite(v))
    throw ValidationError("config key '" + key + "': expected a number, got '" + std::string(text) + "'");
  return v * factor;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "m",     "theta", "theta_prime", "dtheta", "convention", "k_min",       "k_max",
      "k_nodes", "t_max", "t_nodes",   "t_step", "sites",      "am",          "e_over_m",
      "e_min", "e_max", "e_step",      "threads", "quad_cutoff", "quad_tol", "dense_limit",
      "out"};
  return keys;
}

KeyValues parse_key_values(std::string_view text, const std::string& origin) {
  KeyValues kv;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ValidationError(origin + ":" + std::to_string(line_no) + ": expected key=value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ValidationError(origin + ":" + std::to_string(line_no) + ": empty key or value");
    kv.emplace_back(std::string(key), std::string(value));
  }
  return kv;
}

KeyValues read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_key_values(ss.str(), path.string());
}

RunConfig make_config(Mode mode, const KeyValues& kv) {
  RunConfig c;
  c.mode = mode;
  const bool free = is_free(mode);
  if (!free) {
    c.t_max = 20;
    c.t_step = 0.05;
  }

  double m = 1;
  double am = 0.8;
  double e_over_m = 1;
  int sites = 8;
  std::optional<double> theta, theta_prime, dtheta;
  std::optional<Index> t_nodes;
  std::optional<double> t_step;

  const auto& known = config_keys();
  for (const auto& [key, value] : kv) {
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ValidationError("unknown config key '" + key + "'");
    if ((free && kEdOnly.count(key)) || (!free && kFreeOnly.count(key)) ||
        (mode != Mode::EdScan && kScanOnly.count(key)))
      throw ValidationError("config key '" + key + "' does not apply to " + std::string(mode_name(mode)));

    if (key == "m") m = parse_number(value, key);
    else if (key == "theta") theta = parse_number(value, key);
    else if (key == "theta_prime") theta_prime = parse_number(value, key);
    else if (key == "dtheta") dtheta = parse_number(value, key);
    else if (key == "convention") {
      if (value == "standard") c.free.convention = GammaConvention::Standard;
      else if (value == "alternate") c.free.convention = GammaConvention::Alternate;
      else throw ValidationError("config key 'convention': expected standard or alternate, got '" + value + "'");
    } else if (key == "k_min") c.k_min = parse_number(value, key);
    else if (key == "k_max") c.k_max = parse_number(value, key);
    else if (key == "k_nodes") c.k_nodes = parse_integer(value, key);
    else if (key == "t_max") c.t_max = parse_number(value, key);
    else if (key == "t_nodes") t_nodes = parse_integer(value, key);
    else if (key == "t_step") t_step = parse_number(value, key);
    else if (key == "sites") sites = static_cast<int>(parse_integer(value, key));
    else if (key == "am") am = parse_number(value, key);
    else if (key == "e_over_m") e_over_m = parse_number(value, key);
    else if (key == "e_min") c.e_min = parse_number(value, key);
    else if (key == "e_max") c.e_max = parse_number(value, key);
    else if (key == "e_step") c.e_step = parse_number(value, key);
    else if (key == "threads") {
      const long n = parse_integer(value, key);
      if (n < 0) throw ValidationError("config key 'threads' must be >= 0");
      c.threads = static_cast<unsigned>(n);
    } else if (key == "quad_cutoff") c.quadrature.cutoff_factor = parse_number(value, key);
    else if (key == "quad_tol") c.quadrature.abs_tol = parse_number(value, key);
    else if (key == "dense_limit") c.solver.dense_limit = parse_integer(value, key);
    else if (key == "out") c.out = value;
  }

  if (!(m > 0)) throw ValidationError("config key 'm' must be > 0");

  // Angles.
  if (dtheta && (theta || theta_prime))
    throw ValidationError("config: give either 'dtheta' or 'theta'/'theta_prime', not both");
  if (dtheta) {
    const double wrapped = wrap_angle(*dtheta);
    if (wrapped != *dtheta)
      c.warnings.push_back("dtheta = " + format_double(*dtheta) + " wrapped to " + format_double(wrapped) +
                           " in (-pi, pi]");
    c.free = FreeParams<double>{m, wrapped, 0.0, c.free.convention};
  } else {
    if (free && !theta && !theta_prime) {
      c.free = FreeParams<double>{m, std::numbers::pi, 0.0, c.free.convention};
    } else {
      c.free = FreeParams<double>{m, theta.value_or(0), theta_prime.value_or(0), c.free.convention};
      const double raw = c.free.theta - c.free.theta_prime;
      if (wrap_angle(raw) != raw)
        c.warnings.push_back("theta - theta_prime = " + format_double(raw) + " wrapped to " +
                             format_double(wrap_angle(raw)) + " in (-pi, pi]");
    }
  }
  c.free.validate();

  // Lattice.
  if (sites % 2 != 0) throw ValidationError("config key 'sites' must be even (staggered unit cell), got " +
                                            std::to_string(sites));
  c.lattice = LatticeParams::from_units(sites, am, e_over_m, m);
  if (!free) c.lattice.validate();

  // Time grid.
  if (t_nodes && t_step) throw ValidationError("config: give either 't_nodes' or 't_step', not both");
  if (t_nodes) {
    c.t_nodes = *t_nodes;
    c.t_step.reset();
  }
  if (t_step) c.t_step = t_step;
  if (!(c.t_max > 0)) throw ValidationError("config key 't_max' must be > 0 (the time grid would be empty)");
  if (c.t_step) {
    if (!(*c.t_step > 0)) throw ValidationError("config key 't_step' must be > 0");
    if (count_steps(c.t_max, *c.t_step) < 2)
      throw ValidationError("config: t_step exceeds t_max (the time grid would have a single point)");
  } else if (c.t_nodes < 2) {
    throw ValidationError("config key 't_nodes' must be >= 2, got " + std::to_string(c.t_nodes));
  }

  // Momentum grid.
  if (free) {
    if (!(c.k_min < c.k_max)) throw ValidationError("config: k_min must be below k_max");
    if (c.k_nodes < 2) throw ValidationError("config key 'k_nodes' must be >= 2");
    if (mode != Mode::FreePhase) {
      if (c.k_min != -c.k_max || c.k_nodes % 2 == 0)
        throw ValidationError("config: " + std::string(mode_name(mode)) +
                              " needs a symmetric k grid (k_min = -k_max) with an odd 'k_nodes' so that "
                              "k = 0 is a node");
    }
  }

  // Coupling grid.
  if (mode == Mode::EdScan) {
    if (!(c.e_min >= 0)) throw ValidationError("config key 'e_min' must be >= 0");
    if (!(c.e_step > 0)) throw ValidationError("config key 'e_step' must be > 0");
    if (!(c.e_max >= c.e_min)) throw ValidationError("config: e_max must be >= e_min");
  }
  if (c.quadrature.cutoff_factor <= 0 || c.quadrature.abs_tol <= 0)
    throw ValidationError("config: quad_cutoff and quad_tol must be > 0");
  if (c.solver.dense_limit < 0) throw ValidationError("config key 'dense_limit' must be >= 0");
  return c;
}

VectorXd RunConfig::k_grid() const {
  const double m = free.m;
  if (k_min == -k_max && k_nodes % 2 == 1) return symmetric_grid(k_max * m, (k_nodes - 1) / 2);
  return uniform_grid(k_min * m, k_max * m, k_nodes);
}

VectorXd RunConfig::t_grid() const {
  const double m = is_free(mode) ? free.m : lattice.mass;
  VectorXd tm;
  if (t_step) {
    const Index n = count_steps(t_max, *t_step);
    tm.resize(n);
    for (Index i = 0; i < n; ++i) tm(i) = static_cast<double>(i) * *t_step;
  } else {
    tm = uniform_grid(0.0, t_max, t_nodes);
  }
  return tm / m;
}

VectorXd RunConfig::e_over_m_grid() const {
  const Index n = count_steps(e_max - e_min, e_step);
  VectorXd e(n);
  for (Index i = 0; i < n; ++i) e(i) = e_min + static_cast<double>(i) * e_step;
  return e;
}

std::map<std::string, std::string> RunConfig::resolved() const {
  std::map<std::string, std::string> r;
  r["t_max"] = format_double(t_max);
  if (t_step) r["t_step"] = format_double(*t_step);
  else r["t_nodes"] = std::to_string(t_nodes);
  if (is_free(mode)) {
    r["m"] = format_double(free.m);
    r["theta"] = format_double(free.theta);
    r["theta_prime"] = format_double(free.theta_prime);
    r["dtheta"] = format_double(free.dtheta());
    r["convention"] = free.convention == GammaConvention::Standard ? "standard" : "alternate";
    r["k_min"] = format_double(k_min);
    r["k_max"] = format_double(k_max);
    r["k_nodes"] = std::to_string(k_nodes);
    r["quad_cutoff"] = format_double(quadrature.cutoff_factor);
    r["quad_tol"] = format_double(quadrature.abs_tol);
  } else {
    r["m"] = format_double(lattice.mass);
    r["sites"] = std::to_string(lattice.sites);
    r["am"] = format_double(lattice.spacing * lattice.mass);
    r["dense_limit"] = std::to_string(solver.dense_limit);
    if (mode == Mode::EdScan) {
      r["e_min"] = format_double(e_min);
      r["e_max"] = format_double(e_max);
      r["e_step"] = format_double(e_step);
      r["threads"] = std::to_string(threads);
    } else {
      r["e_over_m"] = format_double(lattice.coupling / lattice.mass);
    }
  }
  return r;
}

}  // namespace tq
