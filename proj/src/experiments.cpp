#include "gvr/experiments.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include <Eigen/SVD>

#include "gvr/errors.hpp"
#include "gvr/fastalg.hpp"
#include "gvr/grbase.hpp"
#include "gvr/oracle.hpp"

namespace gvr {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

double spectral_norm(const DenseMat& A) {
  Eigen::JacobiSVD<DenseMat> svd(A);
  return svd.singularValues()[0];
}

double rel_spectral(const DenseMat& A, const DenseMat& ref) { return spectral_norm(A - ref) / spectral_norm(ref); }

double rel2(const Vec& a, const Vec& ref) { return (a - ref).norm() / ref.norm(); }

void write_provenance(std::ostream& os, const Provenance& prov) {
  for (const auto& [k, v] : prov) os << "# " << k << '=' << v << '\n';
}

FixtureRow check(std::string fixture, std::string method, std::string quantity, double value, double lo, double hi) {
  return {std::move(fixture), std::move(method), std::move(quantity), value, lo, hi, lo <= value && value <= hi};
}

struct Quantities {
  Vec alpha, yhat;
  double tr = kNaN;
};

bool finite(const Vec& v) { return v.size() > 0 && v.array().isFinite().all(); }

// Each quantity is kept even when a later stage of the same method breaks down.
Quantities method_quantities(const IdentProblem& p, Method m) {
  Quantities q;
  const Vec d = Vec::Constant(p.y.size(), p.gamma);
  try {
    if (m == Method::GvR || m == Method::GvRt) {
      const GvRMatrix a = m == Method::GvR ? output_gvr(p.kernel, p.input, p.grid)
                                           : gr_to_gvr(output_gr(p.kernel, p.input, p.grid));
      const GvRCholesky L = cholesky(a, d);
      q.alpha = solve_upper(L, solve_lower(L, p.y));
      q.yhat = matvec(a, q.alpha);
      q.tr = trace_inverse(L);
    } else if (m == Method::GR || m == Method::GRs) {
      const GRMatrix g = output_gr(p.kernel, p.input, p.grid);
      const GRCholesky L = gr_cholesky(g, d);
      q.alpha = gr_solve_upper(L, gr_solve_lower(L, p.y));
      q.yhat = gr_matvec(g, q.alpha);
      q.tr = m == Method::GRs ? grs_trace_inverse(L) : gr_trace_inverse(gr_inv_chol(L, kInf));
    } else {
      const auto r = evaluate_criteria(p, Method::Ref);
      q.alpha = r.alpha;
      q.yhat = r.yhat;
      q.tr = r.trMinv;
    }
  } catch (const Error&) {
  }
  return q;
}

template <class F>
double time_batch(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

InputSignal make_input(const std::string& name, double alpha) {
  if (name == "S1") return InputSignal::impulse(Domain::DT);
  if (name == "S2") return InputSignal::exponential(alpha, Domain::DT);
  throw ValidationError("unknown input '" + name + "' (expected S1 or S2)");
}

TrialData make_trial(std::uint64_t seed, int trial, const InputSignal& input, Index n, double snr, int order,
                     double rmin, double rmax) {
  const auto k = static_cast<std::uint64_t>(trial);
  const LTISystem sys = generate_random_system(order, rmin, rmax, derive_seed(seed, 2 * k), n);
  const TimeGrid grid = TimeGrid::uniform(n);
  const SimulatedData data = simulate(sys.g, input, grid, snr, derive_seed(seed, 2 * k + 1));
  return {sys.g.segment(1, n), data.y};
}

std::vector<FixtureRow> run_fixtures() {
  std::vector<FixtureRow> rows;
  const double any_lo = -kInf, any_hi = kInf;

  {
    const auto ref = extended_example1();
    const TimeGrid grid = TimeGrid::uniform(5);
    const KernelSpec spec = KernelSpec::dc(ref.lambda, ref.rho);
    const Vec y_gvr = matvec(kernel_gvr(spec, grid), ref.x);
    const Vec y_gvrt = matvec(gr_to_gvr(kernel_gr(spec, grid)), ref.x);
    const Vec y_gr = gr_matvec(kernel_gr(spec, grid), ref.x);
    const Vec y_dense = dense_kernel_t<double>(spec, grid) * ref.x;
    rows.push_back(check("example1", "GvR", "relerr_y", rel2(y_gvr, ref.y), 0.0, 1e-7));
    rows.push_back(check("example1", "GvRt", "relerr_y", rel2(y_gvrt, ref.y), any_lo, any_hi));
    rows.push_back(check("example1", "GR", "relerr_y", rel2(y_gr, ref.y), 1e5, any_hi));
    rows.push_back(check("example1", "Ref", "relerr_y", rel2(y_dense, ref.y), any_lo, any_hi));
  }

  {
    const auto ref = extended_example2();
    const TimeGrid grid = TimeGrid::uniform(5);
    const KernelSpec spec = KernelSpec::ss(ref.rho);
    const Vec d = Vec::Constant(5, ref.gamma);
    rows.push_back(check("example2", "Oracle", "kappa_M", ref.kappa_M, 3.191245e4 * 0.99, 3.191245e4 * 1.01));
    rows.push_back(check("example2", "Oracle", "cond_inner_max", ref.cond_inner_max, 3.2e16 * 0.95, 3.2e16 * 1.05));

    auto gvr_err = [&](const GvRMatrix& a) {
      const GvRCholesky L = cholesky(a, d);
      const DenseMat T = inverse_to_dense(inv_chol_rep(L, d));
      return rel_spectral(T.triangularView<Eigen::StrictlyLower>(), ref.tril_Linv);
    };
    rows.push_back(check("example2", "GvR", "relerr_tril_Linv", gvr_err(kernel_gvr(spec, grid)), 0.0, 1e-9));
    rows.push_back(
        check("example2", "GvRt", "relerr_tril_Linv", gvr_err(gr_to_gvr(kernel_gr(spec, grid))), any_lo, any_hi));

    const GRCholesky L = gr_cholesky(kernel_gr(spec, grid), d);
    const GRInverse inv = gr_inv_chol(L, kInf);
    const DenseMat T = gr_inverse_to_dense(inv);
    rows.push_back(check("example2", "GR(High)", "kappa_YW", ref.kappa_YW, 1e15, any_hi));
    rows.push_back(check("example2", "GR", "kappa_YW", inv.condition, any_lo, any_hi));
    rows.push_back(check("example2", "GR", "relerr_tril_Linv",
                         rel_spectral(T.triangularView<Eigen::StrictlyLower>(), ref.tril_Linv), 0.5, any_hi));
    rows.push_back(check("example2", "GR", "relerr_Z", rel_spectral(DenseMat(inv.Z), ref.Z), any_lo, any_hi));
  }
  for (auto& r : rows)
    if (std::isnan(r.value)) r.pass = false;
  return rows;
}

void write_csv(std::ostream& os, const std::vector<FixtureRow>& rows, const Provenance& prov) {
  write_provenance(os, prov);
  os << std::setprecision(17);
  os << "fixture,method,quantity,value,lo,hi,status\n";
  for (const auto& r : rows)
    os << r.fixture << ',' << r.method << ',' << r.quantity << ',' << r.value << ',' << r.lo << ',' << r.hi << ','
       << (r.pass ? "PASS" : "FAIL") << '\n';
}

std::vector<StabilityRow> run_stability(const StabilityConfig& cfg) {
  static const char* kQuantities[] = {"alpha", "yhat", "trMinv"};
  std::vector<StabilityRow> rows;
  const TimeGrid grid = TimeGrid::uniform(cfg.n);
  const std::size_t nl = cfg.lambdas.size(), nm = cfg.methods.size();

  for (const auto& input_name : cfg.inputs) {
    const std::vector<double> alphas = input_name == "S1" ? std::vector<double>{0.0} : cfg.alphas;
    for (const double alpha : alphas) {
      const InputSignal input = make_input(input_name, alpha);
      // diffs[trial][lambda][method][quantity]
      std::vector<double> diffs(static_cast<std::size_t>(cfg.trials) * nl * nm * 3, kNaN);
      std::vector<double> refs(static_cast<std::size_t>(cfg.trials) * nl * 3, kNaN);
      auto at = [&](int t, std::size_t l, std::size_t m, int q) -> double& {
        return diffs[((static_cast<std::size_t>(t) * nl + l) * nm + m) * 3 + static_cast<std::size_t>(q)];
      };
      const int threads = std::max(1, cfg.threads);
#pragma omp parallel for schedule(dynamic) num_threads(threads) if (threads > 1)
      for (int t = 0; t < cfg.trials; ++t) {
        const TrialData data = make_trial(cfg.seed, t, input, cfg.n, cfg.snr, cfg.order, cfg.rmin, cfg.rmax);
        for (std::size_t l = 0; l < nl; ++l) {
          const IdentProblem prob{data.y, grid, input, KernelSpec::dc(cfg.lambdas[l], cfg.rho), cfg.gamma};
          const Quantities ref = method_quantities(prob, Method::Ref);
          if (!finite(ref.alpha)) continue;
          double* rr = &refs[(static_cast<std::size_t>(t) * nl + l) * 3];
          rr[0] = ref.alpha.norm();
          rr[1] = ref.yhat.norm();
          rr[2] = std::abs(ref.tr);
          for (std::size_t m = 0; m < nm; ++m) {
            const Quantities q = method_quantities(prob, cfg.methods[m]);
            if (finite(q.alpha)) at(t, l, m, 0) = (q.alpha - ref.alpha).norm();
            if (finite(q.yhat)) at(t, l, m, 1) = (q.yhat - ref.yhat).norm();
            if (std::isfinite(q.tr)) at(t, l, m, 2) = std::abs(q.tr - ref.tr);
          }
        }
      }
      for (std::size_t l = 0; l < nl; ++l)
        for (std::size_t m = 0; m < nm; ++m)
          for (int q = 0; q < 3; ++q) {
            StabilityRow row{input_name, alpha, cfg.lambdas[l], cfg.methods[m], kQuantities[q], 0.0, 0.0, 0.0, 0};
            int ok = 0;
            for (int t = 0; t < cfg.trials; ++t) {
              const double v = at(t, l, m, q);
              if (std::isfinite(v)) {
                row.mean_diff += v;
                row.mean_ref += refs[(static_cast<std::size_t>(t) * nl + l) * 3 + static_cast<std::size_t>(q)];
                ++ok;
              } else {
                ++row.nan_trials;
              }
            }
            row.mean_diff = ok ? row.mean_diff / ok : kNaN;
            row.mean_ref = ok ? row.mean_ref / ok : kNaN;
            row.log10_mean_diff = std::log10(row.mean_diff);
            rows.push_back(row);
          }
    }
  }
  return rows;
}

void write_csv(std::ostream& os, const std::vector<StabilityRow>& rows, const Provenance& prov) {
  write_provenance(os, prov);
  os << std::setprecision(17);
  os << "input,alpha,lambda,method,quantity,log10_mean_diff,mean_ref,nan_trials\n";
  for (const auto& r : rows)
    os << r.input << ',' << r.alpha << ',' << r.lambda << ',' << to_string(r.method) << ',' << r.quantity << ','
       << r.log10_mean_diff << ',' << r.mean_ref << ',' << r.nan_trials << '\n';
}

std::vector<BenchRow> run_bench(const BenchConfig& cfg) {
  std::vector<BenchRow> rows;
  const InputSignal input = make_input(cfg.input, cfg.alpha);
  const OptimizeOptions grid_opt;
  const auto points = hyper_grid(KernelSpec::Family::DC, grid_opt);
  for (const Index n : cfg.ns) {
    const TimeGrid grid = TimeGrid::uniform(n);
    const TrialData data = make_trial(cfg.seed, 0, input, n, 10.0, 10, 0.1, 0.9);
    for (const Method m : cfg.methods) {
      if (m == Method::Ref && n > cfg.ref_max_n) continue;
      const int evals = m == Method::Ref ? cfg.ref_evals : cfg.evals;
      for (int r = 0; r < cfg.repeats; ++r) {
        double sink = 0.0;
        const double secs = time_batch([&] {
          for (int k = 0; k < evals; ++k) {
            const auto& p = points[static_cast<std::size_t>(k) * points.size() / static_cast<std::size_t>(evals)];
            try {
              sink += evaluate_criteria(IdentProblem{data.y, grid, input, p.kernel, p.gamma}, m).gcv;
            } catch (const Error&) {
            }
          }
        });
        (void)sink;
        rows.push_back({m, n, r, secs, evals});
      }
    }
  }
  return rows;
}

void write_csv(std::ostream& os, const std::vector<BenchRow>& rows, const Provenance& prov) {
  write_provenance(os, prov);
  os << std::setprecision(17);
  os << "method,N,repeat,seconds\n";
  for (const auto& r : rows) os << to_string(r.method) << ',' << r.n << ',' << r.repeat << ',' << r.seconds << '\n';
}

double per_eval_seconds(const std::vector<BenchRow>& rows, Method m, Index n) {
  double best = kInf;
  for (const auto& r : rows)
    if (r.method == m && r.n == n) best = std::min(best, r.seconds / r.evals);
  return std::isinf(best) ? kNaN : best;
}

std::vector<IdentifyRow> run_identify(const IdentifyConfig& cfg) {
  const InputSignal input = make_input(cfg.input, cfg.alpha);
  const TimeGrid grid = TimeGrid::uniform(cfg.n);
  const std::size_t nm = cfg.methods.size();
  std::vector<IdentifyRow> rows(static_cast<std::size_t>(cfg.trials) * nm);
  OptimizeOptions opt = cfg.opt;
  opt.threads = 1;
  const int threads = std::max(1, cfg.threads);
#pragma omp parallel for schedule(dynamic) num_threads(threads) if (threads > 1)
  for (int t = 0; t < cfg.trials; ++t) {
    const TrialData data = make_trial(cfg.seed, t, input, cfg.n, cfg.snr, cfg.order, cfg.rmin, cfg.rmax);
    for (std::size_t m = 0; m < nm; ++m) {
      IdentifyRow row;
      row.trial = t;
      row.method = cfg.methods[m];
      try {
        const auto res = optimize_hyperparams(data.y, grid, input, KernelSpec::Family::DC, cfg.criterion,
                                              cfg.methods[m], opt);
        const IdentProblem prob{data.y, grid, input, res.kernel, res.gamma};
        row.fit = model_fit(data.g0, estimate_impulse(prob, res.report.alpha, cfg.methods[m]));
        row.objective = res.objective;
        row.lambda = res.kernel.lambda;
        row.rho = res.kernel.rho;
        row.gamma = res.gamma;
        row.evaluations = res.evaluations;
        row.failures = res.failures;
      } catch (const Error&) {
        row.fit = row.objective = row.lambda = row.rho = row.gamma = kNaN;
      }
      rows[static_cast<std::size_t>(t) * nm + m] = row;
    }
  }
  return rows;
}

void write_csv(std::ostream& os, const std::vector<IdentifyRow>& rows, const Provenance& prov) {
  write_provenance(os, prov);
  os << std::setprecision(17);
  os << "trial,method,fit,objective,lambda,rho,gamma,evaluations,failures\n";
  for (const auto& r : rows)
    os << r.trial << ',' << to_string(r.method) << ',' << r.fit << ',' << r.objective << ',' << r.lambda << ','
       << r.rho << ',' << r.gamma << ',' << r.evaluations << ',' << r.failures << '\n';
}

double mean_fit(const std::vector<IdentifyRow>& rows, Method m) {
  double s = 0.0;
  int k = 0;
  for (const auto& r : rows)
    if (r.method == m && std::isfinite(r.fit)) {
      s += r.fit;
      ++k;
    }
  return k ? s / k : kNaN;
}

}  // namespace gvr
