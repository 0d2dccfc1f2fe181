#include "config.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "gvr/errors.hpp"

namespace gvrcli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': '" + v + "' is not a number");
  }
}

long to_long(const std::string& key, const std::string& v) {
  long out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    throw ConfigError("config key '" + key + "': '" + v + "' is not an integer");
  return out;
}

std::string join(const std::vector<double>& v) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ";" : "") << v[i];
  return os.str();
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + v[i];
  return s;
}

template <class T>
std::string str(const T& v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::vector<gvr::Method> methods(const Config& c, const std::vector<gvr::Method>& fallback) {
  if (!c.has("methods")) return fallback;
  std::vector<gvr::Method> out;
  for (const auto& s : c.get_strings("methods", {})) {
    try {
      out.push_back(gvr::parse_method(s));
    } catch (const gvr::Error& e) {
      throw ConfigError(e.what());
    }
  }
  if (out.empty()) throw ConfigError("config key 'methods' is empty");
  return out;
}

std::string method_list(const std::vector<gvr::Method>& ms) {
  std::vector<std::string> s;
  for (auto m : ms) s.push_back(gvr::to_string(m));
  return join(s);
}

void require_positive(const std::string& key, double v) {
  if (!(v > 0)) throw ConfigError("config key '" + key + "' must be positive");
}

}  // namespace

Config Config::parse(std::istream& is) {
  Config c;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    c.kv_[key] = trim(line.substr(eq + 1));
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  return parse(f);
}

std::string Config::get(const std::string& key, const std::string& fallback) const {
  const auto it = kv_.find(key);
  return it == kv_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? to_double(key, kv_.at(key)) : fallback;
}

long Config::get_int(const std::string& key, long fallback) const {
  return has(key) ? to_long(key, kv_.at(key)) : fallback;
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const std::string& v = kv_.at(key);
  std::uint64_t out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    throw ConfigError("config key '" + key + "': '" + v + "' is not an unsigned integer");
  return out;
}

std::vector<double> Config::get_doubles(const std::string& key, const std::vector<double>& fallback) const {
  if (!has(key)) return fallback;
  std::vector<double> out;
  for (const auto& s : split(kv_.at(key))) out.push_back(to_double(key, s));
  return out;
}

std::vector<std::string> Config::get_strings(const std::string& key, const std::vector<std::string>& fallback) const {
  return has(key) ? split(kv_.at(key)) : fallback;
}

void Config::require_known(const std::set<std::string>& known) const {
  for (const auto& [k, v] : kv_)
    if (!known.count(k)) throw ConfigError("unknown config key '" + k + "'");
}

gvr::StabilityConfig stability_config(const Config& c) {
  c.require_known({"n", "trials", "seed", "rho", "gamma", "snr", "lambdas", "inputs", "alphas", "methods", "order",
                   "rmin", "rmax", "threads"});
  gvr::StabilityConfig s;
  s.n = c.get_int("n", s.n);
  s.trials = static_cast<int>(c.get_int("trials", s.trials));
  s.seed = c.get_u64("seed", s.seed);
  s.rho = c.get_double("rho", s.rho);
  s.gamma = c.get_double("gamma", s.gamma);
  s.snr = c.get_double("snr", s.snr);
  s.lambdas = c.get_doubles("lambdas", s.lambdas);
  s.inputs = c.get_strings("inputs", s.inputs);
  s.alphas = c.get_doubles("alphas", s.alphas);
  s.methods = methods(c, s.methods);
  s.order = static_cast<int>(c.get_int("order", s.order));
  s.rmin = c.get_double("rmin", s.rmin);
  s.rmax = c.get_double("rmax", s.rmax);
  s.threads = static_cast<int>(c.get_int("threads", s.threads));
  require_positive("n", static_cast<double>(s.n));
  require_positive("trials", s.trials);
  require_positive("gamma", s.gamma);
  require_positive("snr", s.snr);
  for (const auto& in : s.inputs)
    if (in != "S1" && in != "S2") throw ConfigError("config key 'inputs': unknown input '" + in + "'");
  return s;
}

gvr::BenchConfig bench_config(const Config& c) {
  c.require_known({"ns", "repeats", "evals", "ref_evals", "ref_max_n", "methods", "input", "alpha", "seed"});
  gvr::BenchConfig b;
  if (c.has("ns")) {
    b.ns.clear();
    for (double v : c.get_doubles("ns", {})) b.ns.push_back(static_cast<gvr::Index>(v));
  }
  b.repeats = static_cast<int>(c.get_int("repeats", b.repeats));
  b.evals = static_cast<int>(c.get_int("evals", b.evals));
  b.ref_evals = static_cast<int>(c.get_int("ref_evals", b.ref_evals));
  b.ref_max_n = c.get_int("ref_max_n", b.ref_max_n);
  b.methods = methods(c, b.methods);
  b.input = c.get("input", b.input);
  b.alpha = c.get_double("alpha", b.alpha);
  b.seed = c.get_u64("seed", b.seed);
  require_positive("repeats", b.repeats);
  require_positive("evals", b.evals);
  require_positive("ref_evals", b.ref_evals);
  for (auto n : b.ns) require_positive("ns", static_cast<double>(n));
  return b;
}

gvr::IdentifyConfig identify_config(const Config& c) {
  c.require_known({"trials", "n", "input", "alpha", "snr", "seed", "methods", "criterion", "order", "rmin", "rmax",
                   "threads", "grid_points", "grid_lo", "grid_hi", "gamma_points", "gamma_lo", "gamma_hi", "local",
                   "local_lo", "local_hi", "gamma_min", "gamma_max", "ftol"});
  gvr::IdentifyConfig s;
  s.trials = static_cast<int>(c.get_int("trials", s.trials));
  s.n = c.get_int("n", s.n);
  s.input = c.get("input", s.input);
  s.alpha = c.get_double("alpha", s.alpha);
  s.snr = c.get_double("snr", s.snr);
  s.seed = c.get_u64("seed", s.seed);
  s.methods = methods(c, s.methods);
  try {
    s.criterion = gvr::parse_criterion(c.get("criterion", gvr::to_string(s.criterion)));
  } catch (const gvr::Error& e) {
    throw ConfigError(e.what());
  }
  s.order = static_cast<int>(c.get_int("order", s.order));
  s.rmin = c.get_double("rmin", s.rmin);
  s.rmax = c.get_double("rmax", s.rmax);
  s.threads = static_cast<int>(c.get_int("threads", s.threads));
  s.opt.grid_points = static_cast<int>(c.get_int("grid_points", s.opt.grid_points));
  s.opt.grid_lo = c.get_double("grid_lo", s.opt.grid_lo);
  s.opt.grid_hi = c.get_double("grid_hi", s.opt.grid_hi);
  s.opt.gamma_points = static_cast<int>(c.get_int("gamma_points", s.opt.gamma_points));
  s.opt.gamma_lo = c.get_double("gamma_lo", s.opt.gamma_lo);
  s.opt.gamma_hi = c.get_double("gamma_hi", s.opt.gamma_hi);
  s.opt.local = c.get_int("local", s.opt.local ? 1 : 0) != 0;
  s.opt.local_lo = c.get_double("local_lo", s.opt.local_lo);
  s.opt.local_hi = c.get_double("local_hi", s.opt.local_hi);
  s.opt.gamma_min = c.get_double("gamma_min", s.opt.gamma_min);
  s.opt.gamma_max = c.get_double("gamma_max", s.opt.gamma_max);
  s.opt.nm.ftol = c.get_double("ftol", s.opt.nm.ftol);
  require_positive("trials", s.trials);
  require_positive("n", static_cast<double>(s.n));
  require_positive("snr", s.snr);
  require_positive("grid_points", s.opt.grid_points);
  require_positive("gamma_points", s.opt.gamma_points);
  if (s.input != "S1" && s.input != "S2") throw ConfigError("config key 'input': unknown input '" + s.input + "'");
  return s;
}

gvr::Provenance provenance(const gvr::StabilityConfig& c) {
  return {{"command", "stability"}, {"n", str(c.n)},          {"trials", str(c.trials)},
          {"seed", str(c.seed)},    {"rho", str(c.rho)},      {"gamma", str(c.gamma)},
          {"snr", str(c.snr)},      {"lambdas", join(c.lambdas)}, {"inputs", join(c.inputs)},
          {"alphas", join(c.alphas)}, {"methods", method_list(c.methods)}, {"order", str(c.order)},
          {"rmin", str(c.rmin)},    {"rmax", str(c.rmax)},    {"reference", "Ref"}};
}

gvr::Provenance provenance(const gvr::BenchConfig& c) {
  std::vector<double> ns(c.ns.begin(), c.ns.end());
  return {{"command", "bench"},          {"ns", join(ns)},
          {"repeats", str(c.repeats)},   {"evals", str(c.evals)},
          {"ref_evals", str(c.ref_evals)}, {"ref_max_n", str(c.ref_max_n)},
          {"methods", method_list(c.methods)}, {"input", c.input},
          {"alpha", str(c.alpha)},       {"seed", str(c.seed)},
          {"criterion", "GCV"}};
}

gvr::Provenance provenance(const gvr::IdentifyConfig& c) {
  return {{"command", "identify"},
          {"trials", str(c.trials)},
          {"n", str(c.n)},
          {"input", c.input},
          {"alpha", str(c.alpha)},
          {"snr", str(c.snr)},
          {"seed", str(c.seed)},
          {"methods", method_list(c.methods)},
          {"criterion", gvr::to_string(c.criterion)},
          {"kernel", "DC"},
          {"order", str(c.order)},
          {"rmin", str(c.rmin)},
          {"rmax", str(c.rmax)},
          {"grid_points", str(c.opt.grid_points)},
          {"grid_lo", str(c.opt.grid_lo)},
          {"grid_hi", str(c.opt.grid_hi)},
          {"gamma_points", str(c.opt.gamma_points)},
          {"gamma_lo", str(c.opt.gamma_lo)},
          {"gamma_hi", str(c.opt.gamma_hi)},
          {"local", c.opt.local ? "1" : "0"},
          {"local_lo", str(c.opt.local_lo)},
          {"local_hi", str(c.opt.local_hi)},
          {"gamma_min", str(c.opt.gamma_min)},
          {"gamma_max", str(c.opt.gamma_max)},
          {"ftol", str(c.opt.nm.ftol)}};
}

}  // namespace gvrcli
