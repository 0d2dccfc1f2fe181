// gvrsysid: fixtures | stability | bench | identify, CSV on stdout or --out.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "config.hpp"
#include "gvr/errors.hpp"
#include "gvr/experiments.hpp"

namespace {

struct Common {
  std::string config_path, out_path;
  std::vector<std::string> sets;
  std::uint64_t seed = 0;
  long threads = 0, n = 0, trials = 0;
};

void add_common(CLI::App* app, Common& c, bool with_trials, bool with_n, bool with_threads) {
  app->add_option("--config", c.config_path, "flat key=value config file");
  app->add_option("--out", c.out_path, "CSV output path (default stdout)");
  app->add_option("--set", c.sets, "override a config key, key=value (repeatable)");
  app->add_option("--seed", c.seed, "master seed");
  if (with_threads) app->add_option("--threads", c.threads, "worker threads");
  if (with_n) app->add_option("--n", c.n, "number of samples N");
  if (with_trials) app->add_option("--trials", c.trials, "Monte Carlo trials");
}

gvrcli::Config build_config(const CLI::App* app, const Common& c, const char* n_key) {
  gvrcli::Config cfg = c.config_path.empty() ? gvrcli::Config{} : gvrcli::Config::load(c.config_path);
  for (const auto& s : c.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw gvrcli::ConfigError("--set expects key=value, got '" + s + "'");
    cfg.set(s.substr(0, eq), s.substr(eq + 1));
  }
  if (app->count("--seed")) cfg.set("seed", std::to_string(c.seed));
  if (app->get_option_no_throw("--threads") && app->count("--threads")) cfg.set("threads", std::to_string(c.threads));
  if (app->get_option_no_throw("--n") && app->count("--n")) cfg.set(n_key, std::to_string(c.n));
  if (app->get_option_no_throw("--trials") && app->count("--trials")) cfg.set("trials", std::to_string(c.trials));
  return cfg;
}

// Writes to --out when given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw gvrcli::ConfigError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& os() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

int cmd_fixtures(const Common& c) {
  const auto rows = gvr::run_fixtures();
  Sink sink(c.out_path);
  gvr::write_csv(sink.os(), rows, {{"command", "fixtures"}});
  int failed = 0;
  for (const auto& r : rows)
    if (!r.pass) {
      ++failed;
      std::cerr << "FAIL " << r.fixture << ' ' << r.method << ' ' << r.quantity << " = " << r.value << '\n';
    }
  return failed ? 1 : 0;
}

int cmd_stability(const gvrcli::Config& cfg, const Common& c) {
  const auto sc = gvrcli::stability_config(cfg);
  const auto rows = gvr::run_stability(sc);
  Sink sink(c.out_path);
  gvr::write_csv(sink.os(), rows, gvrcli::provenance(sc));
  return 0;
}

int cmd_bench(const gvrcli::Config& cfg, const Common& c) {
  const auto bc = gvrcli::bench_config(cfg);
  const auto rows = gvr::run_bench(bc);
  Sink sink(c.out_path);
  gvr::write_csv(sink.os(), rows, gvrcli::provenance(bc));

  // Growth check for the structured methods: per doubling of N at most 1.5x the linear rate.
  int status = 0;
  for (const auto m : bc.methods) {
    if (m != gvr::Method::GvR && m != gvr::Method::GvRt) continue;
    for (std::size_t k = 1; k < bc.ns.size(); ++k) {
      const double t0 = gvr::per_eval_seconds(rows, m, bc.ns[k - 1]);
      const double t1 = gvr::per_eval_seconds(rows, m, bc.ns[k]);
      const double linear = static_cast<double>(bc.ns[k]) / static_cast<double>(bc.ns[k - 1]);
      const double ratio = t1 / t0;
      const bool ok = ratio <= 1.5 * linear;
      std::cerr << (ok ? "ok   " : "SLOW ") << gvr::to_string(m) << " N " << bc.ns[k - 1] << " -> " << bc.ns[k]
                << " time ratio " << ratio << " (bound " << 1.5 * linear << ")\n";
      if (!ok) status = 2;
    }
  }
  return status;
}

int cmd_identify(const gvrcli::Config& cfg, const Common& c) {
  const auto ic = gvrcli::identify_config(cfg);
  const auto rows = gvr::run_identify(ic);
  Sink sink(c.out_path);
  gvr::write_csv(sink.os(), rows, gvrcli::provenance(ic));
  std::cerr << "method,mean_fit,mean_objective,failed_trials\n";
  for (const auto m : ic.methods) {
    double obj = 0.0;
    int k = 0, failed = 0;
    for (const auto& r : rows) {
      if (r.method != m) continue;
      if (std::isfinite(r.objective)) {
        obj += r.objective;
        ++k;
      } else {
        ++failed;
      }
    }
    std::cerr << gvr::to_string(m) << ',' << std::setprecision(6) << gvr::mean_fit(rows, m) << ','
              << (k ? obj / k : NAN) << ',' << failed << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Givens-vector kernel system identification experiments"};
  app.require_subcommand(1);
  Common fx, st, be, id;
  auto* fixtures = app.add_subcommand("fixtures", "run the two instability fixtures against extended precision");
  add_common(fixtures, fx, false, false, false);
  auto* stability = app.add_subcommand("stability", "GR vs GvR error sweep over lambda");
  add_common(stability, st, true, true, true);
  auto* bench = app.add_subcommand("bench", "GCV evaluation timing with respect to N");
  add_common(bench, be, false, true, false);
  auto* identify = app.add_subcommand("identify", "Monte Carlo impulse-response identification, model fits");
  add_common(identify, id, true, true, true);

  CLI11_PARSE(app, argc, argv);
  try {
    if (fixtures->parsed()) return cmd_fixtures(fx);
    if (stability->parsed()) return cmd_stability(build_config(stability, st, "n"), st);
    if (bench->parsed()) return cmd_bench(build_config(bench, be, "ns"), be);
    if (identify->parsed()) return cmd_identify(build_config(identify, id, "n"), id);
  } catch (const gvrcli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 64;
  } catch (const gvr::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
