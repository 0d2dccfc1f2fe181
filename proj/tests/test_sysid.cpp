#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "gvr/errors.hpp"
#include "gvr/optimize.hpp"
#include "gvr/sysid.hpp"
#include "test_util.hpp"

using namespace gvr;
using namespace gvrtest;

namespace {

IdentProblem dc_problem(Index n, double lam, double rho, double gamma, std::uint64_t seed,
                        InputSignal in = InputSignal::impulse()) {
  const auto grid = TimeGrid::uniform(n);
  const auto sys = generate_random_system(10, 0.1, 0.9, seed, n);
  const auto data = simulate(sys.g, in, grid, 10.0, seed + 1);
  return IdentProblem{data.y, grid, in, KernelSpec::dc(lam, rho), gamma};
}

}  // namespace

TEST(Simulate, NoiseFreeEqualsConvolution) {
  const auto grid = TimeGrid::uniform(50);
  const auto sys = generate_random_system(4, 0.2, 0.8, 3, 50);
  const auto in = InputSignal::exponential(0.5);
  const auto d = simulate(sys.g, in, grid, INFINITY, 9);
  EXPECT_EQ((d.y - convolve(sys.g, in, grid)).norm(), 0.0);
  EXPECT_EQ(d.sigma, 0.0);
}

TEST(Simulate, NoiseLevelFollowsSnr) {
  const auto grid = TimeGrid::uniform(4000);
  const auto sys = generate_random_system(6, 0.2, 0.8, 4, 4000);
  const auto d = simulate(sys.g, InputSignal::exponential(0.01), grid, 4.0, 10);
  const double var0 = (d.y0.array() - d.y0.mean()).square().mean();
  EXPECT_NEAR(d.sigma * d.sigma, var0 / 4.0, 1e-15);
  const double emp = (d.y - d.y0).squaredNorm() / 4000.0;
  EXPECT_NEAR(emp / (d.sigma * d.sigma), 1.0, 0.1);
}

TEST(Convolve, UnitImpulsePicksSamples) {
  Vec g = Vec::LinSpaced(11, 0.0, 1.0);
  const Vec y = convolve(g, InputSignal::impulse(), TimeGrid::uniform(10));
  for (Index i = 0; i < 10; ++i) EXPECT_EQ(y[i], g[i + 1]);
}

TEST(Convolve, DeltaResponseReproducesInput) {
  Vec g = Vec::Zero(21);
  g[0] = 1.0;
  const auto grid = TimeGrid::uniform(20);
  const Vec y = convolve(g, InputSignal::exponential(0.5), grid);
  for (Index i = 0; i < 20; ++i) EXPECT_NEAR(y[i], std::exp(-0.5 * grid[i]), 1e-16);
}

TEST(EvaluateCriteria, ScalarGcvIsSquaredSample) {
  Vec y(1);
  y << 1.7;
  for (double g : {1e-3, 0.5, 10.0})
    for (double lam : {0.3, 0.9}) {
      const IdentProblem p{y, TimeGrid::uniform(1), InputSignal::impulse(), KernelSpec::dc(lam, 0.5), g};
      EXPECT_NEAR(evaluate_criteria(p).gcv, 1.7 * 1.7, 1e-12);
    }
}

TEST(EvaluateCriteria, AllMethodsMatchDense) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 12; ++t) {
    const Index n = 20 + static_cast<Index>(rng() % 181);
    const double lam = uniform(rng, 0.3, 0.6), rho = uniform(rng, 0.6, 0.95);
    const double g = std::pow(10.0, uniform(rng, -4, 0));
    const auto p = dc_problem(n, lam, rho, g, rng());
    const auto dense = dense_criteria_t<long double>(dense_kernel_t<double>(p.kernel, p.grid), p.y, g);
    for (Method m : {Method::GvR, Method::GvRt, Method::GR, Method::GRs, Method::Ref}) {
      const auto r = evaluate_criteria(p, m);
      const std::string tag = to_string(m) + " n=" + std::to_string(n);
      EXPECT_LT(rel(r.gcv, dense.gcv), 1e-8) << tag;
      EXPECT_LT(rel(r.eb, dense.eb), 1e-8) << tag;
      EXPECT_LT(rel(r.gml, dense.gml), 1e-8) << tag;
      EXPECT_LT(rel(r.sure, dense.sure), 1e-8) << tag;
      EXPECT_LT(rel_vec(r.alpha, dense.alpha), 1e-8) << tag;
    }
  }
}

TEST(EvaluateCriteria, ExponentialInputMatchesDense) {
  std::mt19937_64 rng(32);
  for (int t = 0; t < 6; ++t) {
    const double alpha = uniform(rng, 0.2, 1.5);
    const auto in = InputSignal::exponential(alpha);
    const auto p = dc_problem(150, uniform(rng, 0.3, 0.6), uniform(rng, 0.6, 0.95), 1e-3, rng(), in);
    const auto dense = dense_criteria_t<long double>(dense_output(p.kernel, in, p.grid), p.y, p.gamma);
    for (Method m : {Method::GvR, Method::Ref}) EXPECT_LT(rel(evaluate_criteria(p, m).gcv, dense.gcv), 1e-8);
  }
}

TEST(EvaluateCriteria, EvidenceAndLikelihoodDefinitions) {
  const auto p = dc_problem(80, 0.7, 0.8, 1e-2, 5);
  const auto r = evaluate_criteria(p);
  const double n = 80;
  EXPECT_NEAR(r.eb, p.y.dot(r.alpha) + r.logdet, 1e-12 * std::abs(r.eb));
  EXPECT_NEAR(r.gml, n * std::log(p.y.dot(r.alpha)) + r.logdet - n * std::log(n), 1e-12 * std::abs(r.gml));
  EXPECT_NEAR(r.gml, n * std::log(r.yMinvy) + r.logdet - n * std::log(n), 1e-12 * std::abs(r.gml));
}

TEST(EvaluateCriteria, HatTraceIdentity) {
  // 1 - tr(H)/N = gamma tr(M^{-1})/N with H = Psi M^{-1}
  const auto p = dc_problem(120, 0.8, 0.6, 1e-3, 6);
  const auto r = evaluate_criteria(p);
  DenseMat K = dense_kernel_t<double>(p.kernel, p.grid);
  DenseMat M = K;
  M.diagonal().array() += p.gamma;
  const double trH = (K * M.inverse()).trace();
  EXPECT_NEAR(1.0 - trH / 120.0, p.gamma * r.trMinv / 120.0, 1e-10);
}

TEST(EvaluateCriteria, BreakdownReportsHyperParameters) {
  IdentProblem p = dc_problem(30, 0.9, 0.5, 1e-3, 7);
  p.gamma = 0.0;
  EXPECT_THROW(evaluate_criteria(p), ValidationError);
  // SS with rho = 1 is the constant matrix 1/3 (rank one); the shift is negligible
  const IdentProblem q{Vec::Ones(10), TimeGrid::uniform(10), InputSignal::impulse(), KernelSpec::ss(1.0), 1e-300};
  try {
    evaluate_criteria(q, Method::GvR);
    FAIL() << "expected NotPositiveDefinite";
  } catch (const NotPositiveDefinite& e) {
    EXPECT_NE(std::string(e.what()).find("gamma=1e-300"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("GvR"), std::string::npos) << e.what();
  }
}

TEST(EstimateImpulse, UnitImpulseIsKernelTimesAlpha) {
  const auto p = dc_problem(100, 0.8, 0.7, 1e-2, 8);
  const auto r = evaluate_criteria(p);
  const Vec ref = dense_kernel_t<double>(p.kernel, p.grid) * r.alpha;
  for (Method m : {Method::GvR, Method::GvRt, Method::Ref}) EXPECT_LT(rel_vec(estimate_impulse(p, r.alpha, m), ref), 1e-10);
}

TEST(EstimateImpulse, InterpolatesAsGammaVanishes) {
  const auto grid = TimeGrid::uniform(15);
  const auto sys = generate_random_system(4, 0.3, 0.6, 12, 15);
  const auto d = simulate(sys.g, InputSignal::impulse(), grid, INFINITY, 0);
  double prev = INFINITY;
  for (double g : {1e-2, 1e-5, 1e-8}) {
    const IdentProblem p{d.y, grid, InputSignal::impulse(), KernelSpec::dc(0.9, 0.9), g};
    const double err = rel_vec(estimate_impulse(p, evaluate_criteria(p).alpha), d.y);
    EXPECT_LT(err, prev);
    prev = err;
  }
  EXPECT_LT(prev, 1e-4);
}

TEST(EstimateImpulse, ExponentialInputMatchesTruncatedSum) {
  const Index n = 12;
  const double al = 0.6, lam = 0.8, rho = 0.5;
  const auto grid = TimeGrid::uniform(n);
  const auto in = InputSignal::exponential(al);
  std::mt19937_64 rng(3);
  const Vec alpha = random_vec(n, rng);
  const IdentProblem p{Vec::Zero(n), grid, in, KernelSpec::dc(lam, rho), 1.0};
  for (Method m : {Method::GvR, Method::GvRt, Method::GR, Method::Ref}) {
    const Vec g = estimate_impulse(p, alpha, m);
    for (Index k = 0; k < n; ++k) {
      // g(t_k) = sum_i alpha_i sum_{s=0}^{t_i} K(t_k, s) u(t_i - s)
      long double acc = 0;
      for (Index i = 0; i < n; ++i)
        for (int s = 0; s <= static_cast<int>(grid[i]); ++s)
          acc += alpha[i] * std::pow(static_cast<long double>(lam), grid[k] + s) *
                 std::pow(static_cast<long double>(rho), std::abs(grid[k] - s)) * std::exp(-al * (grid[i] - s));
      EXPECT_NEAR(g[k], static_cast<double>(acc), 1e-8 * std::abs(static_cast<double>(acc))) << to_string(m);
    }
  }
}

TEST(ModelFit, KnownValues) {
  Vec g0(3), g(3);
  g0 << 1, 2, 3;
  g << 1, 2, 4;
  EXPECT_NEAR(model_fit(g0, g), 100 * (1 - std::sqrt(0.5)), 1e-12);
  EXPECT_DOUBLE_EQ(model_fit(g0, g0), 100.0);
  EXPECT_NEAR(model_fit(g0, Vec::Constant(3, 2.0)), 0.0, 1e-12);
  EXPECT_LT(model_fit(g0, g0 * 1.001), 100.0);
  EXPECT_THROW(model_fit(Vec::Ones(3), g), DegenerateReference);
}

TEST(Systems, SecondOrderRealPoles) {
  const auto sys = make_system({0.5, -0.5}, {}, 1.0, 30);
  EXPECT_EQ(sys.g[0], 0.0);
  for (Index k = 1; k <= 30; ++k) {
    const double e = 0.5 * (std::pow(0.5, k - 1) + std::pow(-0.5, k - 1));
    EXPECT_NEAR(sys.g[k], e, 1e-15) << k;
  }
}

TEST(Systems, RandomSystemsAreStableAndDeterministic) {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    const auto a = generate_random_system(10, 0.1, 0.9, seed, 600);
    const auto b = generate_random_system(10, 0.1, 0.9, seed, 600);
    EXPECT_EQ((a.g - b.g).norm(), 0.0);
    EXPECT_NEAR(a.g.tail(600).norm(), 1.0, 1e-12);
    EXPECT_EQ(a.poles.size(), 10u);
    for (const auto& p : a.poles) EXPECT_LE(std::abs(p), 0.9 + 1e-12);
    double c = 0.0;
    for (Index k = 1; k <= 100; ++k) c = std::max(c, std::abs(a.g[k]) / std::pow(0.95, k));
    for (Index k = 100; k <= 600; ++k) EXPECT_LE(std::abs(a.g[k]), c * std::pow(0.95, k));
    EXPECT_LT(std::abs(a.g[600]), 1e-12);
  }
  EXPECT_NE(generate_random_system(10, 0.1, 0.9, 1, 50).g[3], generate_random_system(10, 0.1, 0.9, 2, 50).g[3]);
}

TEST(Seeds, DerivedStreamsDiffer) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t k = 0; k < 1000; ++k) seen.insert(derive_seed(42, k));
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_EQ(derive_seed(42, 7), derive_seed(42, 7));
  EXPECT_NE(derive_seed(42, 7), derive_seed(43, 7));
}

TEST(NelderMead, QuadraticAndFixedPoint) {
  auto f = [](const Vec& x) { return (x[0] - 1) * (x[0] - 1) + 10 * (x[1] + 2) * (x[1] + 2) + 3.0; };
  const auto r = nelder_mead(f, Vec::Zero(2));
  EXPECT_NEAR(r.f, 3.0, 1e-5);
  const auto again = nelder_mead(f, r.x);
  EXPECT_LT(std::abs(again.f - r.f), 1e-8);
}

TEST(NelderMead, NanIsTreatedAsInfinity) {
  auto f = [](const Vec& x) { return x[0] < 0 ? NAN : (x[0] - 2) * (x[0] - 2); };
  const auto r = nelder_mead(f, Vec::Constant(1, 0.5));
  EXPECT_NEAR(r.x[0], 2.0, 1e-2);
}

TEST(Optimize, GridSurfaceMatchesDense) {
  const auto p = dc_problem(200, 0.5, 0.5, 1.0, 40);
  OptimizeOptions opt;
  const auto pts = hyper_grid(KernelSpec::Family::DC, opt);
  EXPECT_EQ(pts.size(), 8u * 8u * 8u);
  const auto a = grid_objectives(p.y, p.grid, p.input, pts, Criterion::GCV, Method::GvR, opt);
  const auto b = grid_objectives(p.y, p.grid, p.input, pts, Criterion::GCV, Method::Ref, opt);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (!std::isfinite(b[k])) continue;
    EXPECT_LT(rel(a[k], b[k]), 1e-6) << pts[k].kernel.lambda << " " << pts[k].kernel.rho << " " << pts[k].gamma;
  }
}

TEST(Optimize, ParallelGridIsBitIdentical) {
  const auto p = dc_problem(150, 0.5, 0.5, 1.0, 41);
  OptimizeOptions serial, par;
  par.threads = 4;
  const auto pts = hyper_grid(KernelSpec::Family::DC, serial);
  for (Criterion c : {Criterion::GCV, Criterion::EB}) {
    const auto a = grid_objectives(p.y, p.grid, p.input, pts, c, Method::GvR, serial);
    const auto b = grid_objectives(p.y, p.grid, p.input, pts, c, Method::GvR, par);
    EXPECT_EQ(a, b);
  }
}

TEST(Optimize, LocalSearchImprovesOnGridAndIsAFixedPoint) {
  const auto p = dc_problem(120, 0.5, 0.5, 1.0, 42);
  for (Criterion c : {Criterion::GCV, Criterion::EB, Criterion::GML, Criterion::SURE}) {
    const auto r = optimize_hyperparams(p.y, p.grid, p.input, KernelSpec::Family::DC, c, Method::GvR);
    EXPECT_LE(r.objective, r.grid_objective) << to_string(c);
    EXPECT_NEAR(criterion_value(r.report, c), r.objective, 1e-12 * std::abs(r.objective));
    EXPECT_GT(r.kernel.lambda, 0.0);
    EXPECT_LT(r.kernel.rho, 1.0);
  }
  // tc and ss families run as well
  EXPECT_NO_THROW(optimize_hyperparams(p.y, p.grid, p.input, KernelSpec::Family::TC, Criterion::GCV, Method::GvR));
  EXPECT_NO_THROW(optimize_hyperparams(p.y, p.grid, p.input, KernelSpec::Family::SS, Criterion::EB, Method::GvR));
}

TEST(Optimize, NoiseFreeDataPushesGammaDown) {
  // y drawn from the DC prior itself, with and without noise
  const Index n = 100;
  const auto grid = TimeGrid::uniform(n);
  const auto spec = KernelSpec::dc(0.9, 0.7);
  const DenseMat K = dense_kernel_t<double>(spec, grid);
  Eigen::SelfAdjointEigenSolver<DenseMat> es(K);
  std::mt19937_64 rng(77);
  std::normal_distribution<double> z;
  Vec w(n);
  for (Index i = 0; i < n; ++i) w[i] = z(rng) * std::sqrt(std::max(0.0, es.eigenvalues()[i]));
  const Vec y0 = es.eigenvectors() * w;
  Vec y1 = y0;
  const double sd = std::sqrt((y0.array() - y0.mean()).square().mean());
  for (Index i = 0; i < n; ++i) y1[i] += 0.3 * sd * z(rng);
  const auto clean = optimize_hyperparams(y0, grid, InputSignal::impulse(), KernelSpec::Family::DC, Criterion::EB,
                                          Method::GvR);
  const auto noisy = optimize_hyperparams(y1, grid, InputSignal::impulse(), KernelSpec::Family::DC, Criterion::EB,
                                          Method::GvR);
  EXPECT_LT(clean.gamma, noisy.gamma);
  EXPECT_LT(clean.gamma, 1e-4);
}

TEST(Optimize, AllFailuresAreReported) {
  OptimizeOptions opt;
  opt.local = false;
  const Vec y = Vec::Constant(5, NAN);
  EXPECT_THROW(optimize_hyperparams(y, TimeGrid::uniform(5), InputSignal::impulse(), KernelSpec::Family::TC,
                                    Criterion::GCV, Method::GvR, opt),
               AllEvaluationsFailed);
}

TEST(Methods, NamesRoundTrip) {
  for (Method m : {Method::GR, Method::GRs, Method::GvR, Method::GvRt, Method::Ref})
    EXPECT_EQ(parse_method(to_string(m)), m);
  EXPECT_THROW(parse_method("gvr"), ValidationError);
  for (Criterion c : {Criterion::EB, Criterion::SURE, Criterion::GCV, Criterion::GML})
    EXPECT_EQ(parse_criterion(to_string(c)), c);
}
