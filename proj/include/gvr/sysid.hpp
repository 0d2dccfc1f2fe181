#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gvr/criteria.hpp"
#include "gvr/kernels.hpp"
#include "gvr/optimize.hpp"

namespace gvr {

// GR: generator route with tr(M^{-1}) from the GR of L^{-1}; GRs: generator route with
// columnwise ||L^{-1} e_k||^2; GvR: closed-form Givens-vector; GvRt: Givens-vector
// converted from the generators; Ref: dense Cholesky.
enum class Method { GR, GRs, GvR, GvRt, Ref };

std::string to_string(Method m);
Method parse_method(const std::string& s);

struct IdentProblem {
  Vec y;
  TimeGrid grid;
  InputSignal input;
  KernelSpec kernel;
  double gamma = 1.0;
};

struct EvalOptions {
  double gr_max_condition = 1e15;  // SingularYW threshold of the GR inverse route
};

// Throws on breakdown (NotPositiveDefinite carries the hyper-parameters in its message).
CriterionReport evaluate_criteria(const IdentProblem& prob, Method m = Method::GvR, const EvalOptions& opt = {});

// g_hat(t_i) = sum_j alpha_j a_j(t_i); a_j is the kernel section convolved with the input.
Vec estimate_impulse(const IdentProblem& prob, const Vec& alpha, Method m = Method::GvR);

// 100 (1 - sqrt(sum |g0 - g| / sum |g0 - mean(g0)|)); DegenerateReference when g0 is constant.
double model_fit(const Vec& g0, const Vec& ghat);

// Stable DT transfer function q^{-1} gain B(q^{-1}) / A(q^{-1}); g holds lags 0..horizon.
struct LTISystem {
  std::vector<std::complex<double>> poles, zeros;
  double gain = 1.0;
  Vec a, b;  // monic denominator and numerator coefficients in q^{-1}
  Vec g;
};

LTISystem make_system(const std::vector<std::complex<double>>& poles, const std::vector<std::complex<double>>& zeros,
                      double gain, Index horizon);

// Random stable system; the impulse response is scaled to unit l2 norm over lags 1..horizon.
LTISystem generate_random_system(int order, double rmin, double rmax, std::uint64_t seed, Index horizon);

// Noise-free DT convolution y(t_i) = sum_{k=0}^{t_i} g(k) u(t_i - k) on integer times.
Vec convolve(const Vec& g, const InputSignal& input, const TimeGrid& grid);

struct SimulatedData {
  Vec y, y0;
  double sigma = 0.0;
};

// sigma^2 = var(y0) / snr; snr = +inf gives noise-free data.
SimulatedData simulate(const Vec& g, const InputSignal& input, const TimeGrid& grid, double snr, std::uint64_t seed);

// Independent stream seed for (master, index), identical for serial and parallel runs.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);
std::mt19937_64 make_rng(std::uint64_t seed);

struct OptimizeOptions {
  int grid_points = 8;  // lambda and rho: linspace(grid_lo, grid_hi, grid_points)
  double grid_lo = 0.05, grid_hi = 0.95;
  int gamma_points = 8;  // log-spaced in [gamma_lo, gamma_hi]
  double gamma_lo = 1e-8, gamma_hi = 1.0;
  bool local = true;  // Nelder-Mead after the grid
  // Box for the local search; points outside evaluate to +inf.
  double local_lo = 1e-3, local_hi = 0.999;  // lambda and rho
  double gamma_min = 1e-10, gamma_max = 1e2;
  NelderMeadOptions nm{};
  int threads = 1;  // grid search worker count (OpenMP)
  EvalOptions eval{};
};

struct OptimizeResult {
  KernelSpec kernel;
  double gamma = 0.0;
  double objective = 0.0;
  double grid_objective = 0.0;
  CriterionReport report;
  int evaluations = 0;
  int failures = 0;
};

OptimizeResult optimize_hyperparams(const Vec& y, const TimeGrid& grid, const InputSignal& input,
                                    KernelSpec::Family family, Criterion criterion, Method m,
                                    const OptimizeOptions& opt = {});

// Objective surface over the default grid, in grid order; failed points are +inf.
struct GridPoint {
  KernelSpec kernel;
  double gamma;
};
std::vector<GridPoint> hyper_grid(KernelSpec::Family family, const OptimizeOptions& opt);
std::vector<double> grid_objectives(const Vec& y, const TimeGrid& grid, const InputSignal& input,
                                    const std::vector<GridPoint>& points, Criterion criterion, Method m,
                                    const OptimizeOptions& opt);

}  // namespace gvr
