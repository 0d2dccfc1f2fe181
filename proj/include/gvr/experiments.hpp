#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "gvr/sysid.hpp"

namespace gvr {

// `# key=value` lines written ahead of each CSV header.
using Provenance = std::vector<std::pair<std::string, std::string>>;

// fixtures

// One checked quantity; pass iff lo <= value <= hi (a NaN value fails).
struct FixtureRow {
  std::string fixture, method, quantity;
  double value = 0.0, lo = 0.0, hi = 0.0;
  bool pass = false;
};

std::vector<FixtureRow> run_fixtures();
void write_csv(std::ostream& os, const std::vector<FixtureRow>& rows, const Provenance& prov = {});

// stability sweep

struct StabilityConfig {
  Index n = 600;
  int trials = 80;
  std::uint64_t seed = 20240601;
  double rho = 0.6, gamma = 1e-4, snr = 10.0;
  std::vector<double> lambdas{0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<std::string> inputs{"S1", "S2"};
  std::vector<double> alphas{0.5};  // S2 decay rates
  std::vector<Method> methods{Method::GR, Method::GRs, Method::GvR, Method::GvRt};
  int order = 10;
  double rmin = 0.1, rmax = 0.9;
  int threads = 1;
};

struct StabilityRow {
  std::string input;
  double alpha = 0.0, lambda = 0.0;
  Method method = Method::GvR;
  std::string quantity;   // alpha | yhat | trMinv
  double mean_diff = 0.0;  // over trials with a finite difference
  double log10_mean_diff = 0.0;
  double mean_ref = 0.0;  // mean norm of the Ref quantity over the same trials
  int nan_trials = 0;
};

// Differences against the Ref method: ||alpha - alpha_ref||, ||yhat - yhat_ref||, |tr - tr_ref|.
std::vector<StabilityRow> run_stability(const StabilityConfig& cfg);
void write_csv(std::ostream& os, const std::vector<StabilityRow>& rows, const Provenance& prov = {});

// timing

struct BenchConfig {
  std::vector<Index> ns{300, 600, 1200, 2400, 4800};
  int repeats = 10;
  int evals = 200;      // GCV evaluations per timed batch (structured methods)
  int ref_evals = 1;    // per batch for Ref
  Index ref_max_n = 4800;
  std::vector<Method> methods{Method::GR, Method::GRs, Method::GvR, Method::GvRt, Method::Ref};
  std::string input = "S1";
  double alpha = 0.5;
  std::uint64_t seed = 20240601;
};

struct BenchRow {
  Method method = Method::GvR;
  Index n = 0;
  int repeat = 0;
  double seconds = 0.0;  // wall time of one batch
  int evals = 0;
};

std::vector<BenchRow> run_bench(const BenchConfig& cfg);
void write_csv(std::ostream& os, const std::vector<BenchRow>& rows, const Provenance& prov = {});

// min over repeats of the batch time divided by the batch size.
double per_eval_seconds(const std::vector<BenchRow>& rows, Method m, Index n);

// accuracy (model fit)

struct IdentifyConfig {
  int trials = 80;
  Index n = 600;
  std::string input = "S1";
  double alpha = 0.5;
  double snr = 10.0;
  std::uint64_t seed = 20240601;
  std::vector<Method> methods{Method::GR, Method::GRs, Method::GvR, Method::GvRt, Method::Ref};
  Criterion criterion = Criterion::GCV;
  OptimizeOptions opt{};
  int order = 10;
  double rmin = 0.1, rmax = 0.9;
  int threads = 1;  // trial-level workers
};

struct IdentifyRow {
  int trial = 0;
  Method method = Method::GvR;
  double fit = 0.0, objective = 0.0;
  double lambda = 0.0, rho = 0.0, gamma = 0.0;
  int evaluations = 0, failures = 0;
};

std::vector<IdentifyRow> run_identify(const IdentifyConfig& cfg);
void write_csv(std::ostream& os, const std::vector<IdentifyRow>& rows, const Provenance& prov = {});

// Mean fit of one method over trials with a finite fit; NaN if none.
double mean_fit(const std::vector<IdentifyRow>& rows, Method m);

// Input signal for "S1" (unit impulse) or "S2" (exp(-alpha t)), DT.
InputSignal make_input(const std::string& name, double alpha);

// Data for trial k: the random system and noisy output on t = 1..n.
struct TrialData {
  Vec g0;  // g(1..n)
  Vec y;
};
TrialData make_trial(std::uint64_t seed, int trial, const InputSignal& input, Index n, double snr, int order,
                     double rmin, double rmax);

}  // namespace gvr
