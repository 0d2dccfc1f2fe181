#include "gvr/sysid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gvr/errors.hpp"
#include "gvr/fastalg.hpp"
#include "gvr/grbase.hpp"
#include "gvr/oracle.hpp"

#if defined(__SSE2__)
#include <xmmintrin.h>
#endif

namespace gvr {

namespace {

// Kernel tails such as lambda^{2t} fall below DBL_MIN for large t; subnormal operands
// slow every recursion by two orders of magnitude. Flush them for the duration of a call.
class FlushSubnormals {
 public:
#if defined(__SSE2__)
  FlushSubnormals() : saved_(_mm_getcsr()) { _mm_setcsr(saved_ | 0x8040u); }  // FTZ | DAZ
  ~FlushSubnormals() { _mm_setcsr(saved_); }

 private:
  unsigned int saved_;
#endif
};

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string describe(const IdentProblem& p) {
  std::ostringstream os;
  os.precision(6);
  if (p.kernel.family == KernelSpec::Family::DC) os << "lambda=" << p.kernel.lambda << ", ";
  os << "rho=" << p.kernel.rho << ", gamma=" << p.gamma;
  return os.str();
}

CriterionReport eval_gvr(const GvRMatrix& a, const Vec& y, double gamma) {
  const Vec d = Vec::Constant(y.size(), gamma);
  const GvRCholesky L = cholesky(a, d);
  Vec alpha = solve_upper(L, solve_lower(L, y));
  Vec yhat = matvec(a, alpha);
  return make_report(y, std::move(alpha), std::move(yhat), logdet(L), trace_inverse(L), gamma);
}

CriterionReport eval_gr(const GRMatrix& g, const Vec& y, double gamma, bool columnwise, double max_cond) {
  const Vec d = Vec::Constant(y.size(), gamma);
  const GRCholesky L = gr_cholesky(g, d);
  Vec alpha = gr_solve_upper(L, gr_solve_lower(L, y));
  Vec yhat = gr_matvec(g, alpha);
  const double tr = columnwise ? grs_trace_inverse(L) : gr_trace_inverse(gr_inv_chol(L, max_cond));
  return make_report(y, std::move(alpha), std::move(yhat), gr_logdet(L), tr, gamma);
}

// Integer lattice 0..t_N and the lattice index of each sample.
std::vector<Index> lattice_index(const TimeGrid& grid) {
  std::vector<Index> idx(static_cast<std::size_t>(grid.size()));
  for (Index i = 0; i < grid.size(); ++i) {
    const double t = grid[i];
    if (t < 0.0 || t != std::floor(t)) throw ValidationError("DT input needs integer sample times");
    idx[static_cast<std::size_t>(i)] = static_cast<Index>(t);
  }
  return idx;
}

TimeGrid lattice(Index m) {
  Vec t(m);
  for (Index i = 0; i < m; ++i) t[i] = static_cast<double>(i);
  return TimeGrid(std::move(t));
}

Vec kernel_apply(const KernelSpec& spec, const TimeGrid& grid, const Vec& x, Method m) {
  switch (m) {
    case Method::GvR:
      return matvec(kernel_gvr(spec, grid), x);
    case Method::GvRt:
      return matvec(gr_to_gvr(kernel_gr(spec, grid)), x);
    case Method::GR:
    case Method::GRs:
      return gr_matvec(kernel_gr(spec, grid), x);
    case Method::Ref:
      return dense_kernel_t<double>(spec, grid) * x;
  }
  return x;
}

// CT exponential input with a DC kernel: a_j(t) = int_0^{t_j} K(t, tau) e^{-alpha (t_j - tau)} dtau.
Vec impulse_ct_exponential(const IdentProblem& prob, const Vec& alpha) {
  const double lam = prob.kernel.dc_lambda(), rho = prob.kernel.rho, al = prob.input.alpha;
  const auto k = output_kernel_constants(lam, rho, al);
  const double ll = std::log(lam), lr = std::log(rho);
  const Index n = prob.grid.size();
  Vec g = Vec::Zero(n);
  for (Index i = 0; i < n; ++i) {
    const double t = prob.grid[i];
    double acc = 0.0;
    for (Index j = 0; j < n; ++j) {
      const double tj = prob.grid[j];
      const double m = std::min(t, tj);
      double a = std::exp(t * (ll + lr) - al * tj) * std::expm1(k.D * m) / k.D;
      if (tj > t) {
        const double base = t * (ll - lr) - al * tj;
        a += (std::exp(base + k.T * tj) - std::exp(base + k.T * t)) / k.T;
      }
      acc += alpha[j] * a;
    }
    g[i] = acc;
  }
  return g;
}

double logit(double p) { return std::log(p / (1.0 - p)); }
double expit(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Vec to_coords(const KernelSpec& s, double gamma) {
  if (s.family == KernelSpec::Family::DC) return Vec{{logit(s.lambda), logit(s.rho), std::log(gamma)}};
  return Vec{{logit(s.rho), std::log(gamma)}};
}

std::pair<KernelSpec, double> from_coords(KernelSpec::Family family, const Vec& x) {
  switch (family) {
    case KernelSpec::Family::DC:
      return {KernelSpec{family, expit(x[0]), expit(x[1])}, std::exp(x[2])};
    case KernelSpec::Family::TC:
      return {KernelSpec{family, expit(x[0]), expit(x[0])}, std::exp(x[1])};
    case KernelSpec::Family::SS:
      return {KernelSpec{family, 1.0, expit(x[0])}, std::exp(x[1])};
  }
  return {KernelSpec{}, 1.0};
}

bool in_box(const KernelSpec& s, double gamma, const OptimizeOptions& opt) {
  auto in = [&](double v) { return v >= opt.local_lo && v <= opt.local_hi; };
  if (!(gamma >= opt.gamma_min && gamma <= opt.gamma_max) || !in(s.rho)) return false;
  return s.family != KernelSpec::Family::DC || in(s.lambda);
}

double objective(const Vec& y, const TimeGrid& grid, const InputSignal& input, const KernelSpec& spec, double gamma,
                 Criterion c, Method m, const EvalOptions& eo) {
  try {
    const IdentProblem prob{y, grid, input, spec, gamma};
    const double v = criterion_value(evaluate_criteria(prob, m, eo), c);
    return std::isfinite(v) ? v : kInf;
  } catch (const std::exception&) {
    return kInf;
  }
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::GR:
      return "GR";
    case Method::GRs:
      return "GRs";
    case Method::GvR:
      return "GvR";
    case Method::GvRt:
      return "GvRt";
    case Method::Ref:
      return "Ref";
  }
  return "?";
}

Method parse_method(const std::string& s) {
  if (s == "GR") return Method::GR;
  if (s == "GRs") return Method::GRs;
  if (s == "GvR") return Method::GvR;
  if (s == "GvRt") return Method::GvRt;
  if (s == "Ref") return Method::Ref;
  throw ValidationError("unknown method '" + s + "'");
}

CriterionReport evaluate_criteria(const IdentProblem& prob, Method m, const EvalOptions& opt) {
  if (!(prob.gamma > 0.0) || !std::isfinite(prob.gamma)) throw ValidationError("gamma must be positive and finite");
  if (prob.y.size() != prob.grid.size()) throw DimensionMismatch("y and the time grid differ in length");
  const FlushSubnormals flush;
  try {
    switch (m) {
      case Method::GvR:
        return eval_gvr(output_gvr(prob.kernel, prob.input, prob.grid), prob.y, prob.gamma);
      case Method::GvRt:
        return eval_gvr(gr_to_gvr(output_gr(prob.kernel, prob.input, prob.grid)), prob.y, prob.gamma);
      case Method::GR:
      case Method::GRs:
        return eval_gr(output_gr(prob.kernel, prob.input, prob.grid), prob.y, prob.gamma, m == Method::GRs,
                       opt.gr_max_condition);
      case Method::Ref:
        return dense_criteria(dense_output(prob.kernel, prob.input, prob.grid), prob.y, prob.gamma);
    }
  } catch (const NotPositiveDefinite& e) {
    throw NotPositiveDefinite(e.index, to_string(m) + ", " + describe(prob));
  }
  throw ValidationError("unknown method");
}

Vec estimate_impulse(const IdentProblem& prob, const Vec& alpha, Method m) {
  const Index n = prob.grid.size();
  if (alpha.size() != n) throw DimensionMismatch("alpha and the time grid differ in length");
  if (prob.input.kind == InputSignal::Kind::UnitImpulse) return kernel_apply(prob.kernel, prob.grid, alpha, m);
  if (prob.input.domain == Domain::CT) return impulse_ct_exponential(prob, alpha);

  // h(tau) = sum_{t_i >= tau} alpha_i e^{-alpha (t_i - tau)} on the lattice, then g_hat = K h.
  const auto idx = lattice_index(prob.grid);
  const Index mlat = idx.back() + 1;
  Vec a = Vec::Zero(mlat);
  for (Index i = 0; i < n; ++i) a[idx[static_cast<std::size_t>(i)]] += alpha[i];
  const double ea = std::exp(-prob.input.alpha);
  Vec h(mlat);
  h[mlat - 1] = a[mlat - 1];
  for (Index tau = mlat - 2; tau >= 0; --tau) h[tau] = a[tau] + ea * h[tau + 1];
  const Vec full = kernel_apply(prob.kernel, lattice(mlat), h, m);
  Vec g(n);
  for (Index i = 0; i < n; ++i) g[i] = full[idx[static_cast<std::size_t>(i)]];
  return g;
}

double model_fit(const Vec& g0, const Vec& ghat) {
  if (g0.size() != ghat.size()) throw DimensionMismatch("model_fit: length mismatch");
  const double mean = g0.mean();
  const double den = (g0.array() - mean).abs().sum();
  if (!(den > 0.0)) throw DegenerateReference("model_fit: reference response is constant");
  const double num = (g0 - ghat).cwiseAbs().sum();
  return 100.0 * (1.0 - std::sqrt(num / den));
}

LTISystem make_system(const std::vector<std::complex<double>>& poles, const std::vector<std::complex<double>>& zeros,
                      double gain, Index horizon) {
  auto poly = [](const std::vector<std::complex<double>>& roots) {
    std::vector<std::complex<double>> c{1.0};
    for (const auto& r : roots) {
      std::vector<std::complex<double>> next(c.size() + 1, 0.0);
      for (std::size_t k = 0; k < c.size(); ++k) {
        next[k] += c[k];
        next[k + 1] -= r * c[k];
      }
      c = std::move(next);
    }
    Vec out(static_cast<Index>(c.size()));
    for (std::size_t k = 0; k < c.size(); ++k) out[static_cast<Index>(k)] = c[k].real();
    return out;
  };
  for (const auto& p : poles)
    if (!(std::abs(p) < 1.0)) throw ValidationError("system poles must lie inside the unit disk");
  LTISystem sys{poles, zeros, gain, poly(poles), poly(zeros), Vec::Zero(horizon + 1)};
  for (Index k = 1; k <= horizon; ++k) {
    double v = k - 1 < sys.b.size() ? gain * sys.b[k - 1] : 0.0;
    for (Index j = 1; j < sys.a.size() && j <= k; ++j) v -= sys.a[j] * sys.g[k - j];
    sys.g[k] = v;
  }
  return sys;
}

LTISystem generate_random_system(int order, double rmin, double rmax, std::uint64_t seed, Index horizon) {
  if (order < 1 || !(0.0 <= rmin && rmin <= rmax && rmax < 1.0))
    throw ValidationError("random system needs order >= 1 and 0 <= rmin <= rmax < 1");
  auto rng = make_rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw = [&](int count, double lo, double hi) {
    std::vector<std::complex<double>> roots;
    auto modulus = [&] { return lo + (hi - lo) * unit(rng); };
    for (int slot = 0; slot < count / 2; ++slot) {
      if (unit(rng) < 0.5) {
        const double r = modulus(), th = M_PI * unit(rng);
        roots.push_back(std::polar(r, th));
        roots.push_back(std::polar(r, -th));
      } else {
        for (int k = 0; k < 2; ++k) roots.emplace_back(unit(rng) < 0.5 ? -modulus() : modulus(), 0.0);
      }
    }
    if (count % 2) roots.emplace_back(unit(rng) < 0.5 ? -modulus() : modulus(), 0.0);
    return roots;
  };
  const auto poles = draw(order, rmin, rmax);
  const auto zeros = draw(order - 1, 0.0, 0.95);
  LTISystem sys = make_system(poles, zeros, 1.0, horizon);
  const double nrm = sys.g.tail(horizon).norm();
  if (nrm > 0.0) {
    sys.gain /= nrm;
    sys.g /= nrm;
  }
  return sys;
}

Vec convolve(const Vec& g, const InputSignal& input, const TimeGrid& grid) {
  const auto idx = lattice_index(grid);
  Vec y(grid.size());
  for (Index i = 0; i < grid.size(); ++i) {
    const Index t = idx[static_cast<std::size_t>(i)];
    double acc = 0.0;
    if (input.kind == InputSignal::Kind::UnitImpulse) {
      acc = t < g.size() ? g[t] : 0.0;
    } else {
      for (Index k = 0; k <= t && k < g.size(); ++k) acc += g[k] * input(static_cast<double>(t - k));
    }
    y[i] = acc;
  }
  return y;
}

SimulatedData simulate(const Vec& g, const InputSignal& input, const TimeGrid& grid, double snr, std::uint64_t seed) {
  if (!(snr > 0.0)) throw ValidationError("snr must be positive");
  SimulatedData out;
  out.y0 = convolve(g, input, grid);
  out.y = out.y0;
  if (std::isinf(snr)) return out;
  const double var = (out.y0.array() - out.y0.mean()).square().mean();
  out.sigma = std::sqrt(var / snr);
  auto rng = make_rng(seed);
  std::normal_distribution<double> noise(0.0, out.sigma);
  for (Index i = 0; i < out.y.size(); ++i) out.y[i] += noise(rng);
  return out;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::uint32_t w[2];
  seq.generate(w, w + 2);
  return (static_cast<std::uint64_t>(w[0]) << 32) | w[1];
}

std::mt19937_64 make_rng(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return std::mt19937_64(seq);
}

std::vector<GridPoint> hyper_grid(KernelSpec::Family family, const OptimizeOptions& opt) {
  auto lin = [&](int k) {
    return opt.grid_points == 1 ? opt.grid_lo
                                : opt.grid_lo + (opt.grid_hi - opt.grid_lo) * k / (opt.grid_points - 1);
  };
  auto lg = [&](int k) {
    if (opt.gamma_points == 1) return opt.gamma_lo;
    const double a = std::log(opt.gamma_lo), b = std::log(opt.gamma_hi);
    return std::exp(a + (b - a) * k / (opt.gamma_points - 1));
  };
  std::vector<GridPoint> pts;
  if (family == KernelSpec::Family::DC) {
    for (int i = 0; i < opt.grid_points; ++i)
      for (int j = 0; j < opt.grid_points; ++j)
        for (int k = 0; k < opt.gamma_points; ++k) pts.push_back({KernelSpec{family, lin(i), lin(j)}, lg(k)});
  } else {
    for (int j = 0; j < opt.grid_points; ++j)
      for (int k = 0; k < opt.gamma_points; ++k) {
        const double r = lin(j);
        pts.push_back({KernelSpec{family, family == KernelSpec::Family::TC ? r : 1.0, r}, lg(k)});
      }
  }
  return pts;
}

std::vector<double> grid_objectives(const Vec& y, const TimeGrid& grid, const InputSignal& input,
                                    const std::vector<GridPoint>& points, Criterion criterion, Method m,
                                    const OptimizeOptions& opt) {
  std::vector<double> out(points.size(), kInf);
  const long count = static_cast<long>(points.size());
  const int threads = std::max(1, opt.threads);
#pragma omp parallel for schedule(static) num_threads(threads) if (threads > 1)
  for (long k = 0; k < count; ++k) {
    const auto& p = points[static_cast<std::size_t>(k)];
    out[static_cast<std::size_t>(k)] = objective(y, grid, input, p.kernel, p.gamma, criterion, m, opt.eval);
  }
  return out;
}

OptimizeResult optimize_hyperparams(const Vec& y, const TimeGrid& grid, const InputSignal& input,
                                    KernelSpec::Family family, Criterion criterion, Method m,
                                    const OptimizeOptions& opt) {
  const auto points = hyper_grid(family, opt);
  const auto vals = grid_objectives(y, grid, input, points, criterion, m, opt);
  OptimizeResult res;
  res.evaluations = static_cast<int>(vals.size());
  std::size_t best = vals.size();
  for (std::size_t k = 0; k < vals.size(); ++k) {
    if (!std::isfinite(vals[k])) {
      ++res.failures;
      continue;
    }
    if (best == vals.size() || vals[k] < vals[best]) best = k;
  }
  if (best == vals.size()) throw AllEvaluationsFailed("every grid point failed for method " + to_string(m));
  res.kernel = points[best].kernel;
  res.gamma = points[best].gamma;
  res.grid_objective = vals[best];
  res.objective = vals[best];

  if (opt.local) {
    auto f = [&](const Vec& x) {
      const auto [spec, gamma] = from_coords(family, x);
      if (!in_box(spec, gamma, opt)) return std::numeric_limits<double>::infinity();
      const double v = objective(y, grid, input, spec, gamma, criterion, m, opt.eval);
      ++res.evaluations;
      if (!std::isfinite(v)) ++res.failures;
      return v;
    };
    const auto nm = nelder_mead(f, to_coords(res.kernel, res.gamma), opt.nm);
    if (nm.f < res.objective) {
      const auto [spec, gamma] = from_coords(family, nm.x);
      res.kernel = spec;
      res.gamma = gamma;
      res.objective = nm.f;
    }
  }
  res.report = evaluate_criteria(IdentProblem{y, grid, input, res.kernel, res.gamma}, m, opt.eval);
  return res;
}

}  // namespace gvr
