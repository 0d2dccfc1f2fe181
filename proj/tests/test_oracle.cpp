#include <gtest/gtest.h>

#include <cmath>

#include "gvr/double_double.hpp"
#include "gvr/errors.hpp"
#include "gvr/oracle.hpp"
#include "test_util.hpp"

using namespace gvr;
using namespace gvrtest;

TEST(DenseCriteria, TwoByTwoHandCase) {
  DenseMat K(2, 2);
  K << 2, 1, 1, 2;
  Vec y(2);
  y << 1, 0;
  const auto r = dense_criteria(K, y, 1.0);
  EXPECT_NEAR(r.logdet, std::log(8.0), 1e-14);
  EXPECT_NEAR(r.alpha[0], 3.0 / 8, 1e-14);
  EXPECT_NEAR(r.alpha[1], -1.0 / 8, 1e-14);
  EXPECT_NEAR(r.trMinv, 6.0 / 8, 1e-14);
  EXPECT_NEAR(r.yhat[0], 5.0 / 8, 1e-14);
  EXPECT_NEAR(r.yhat[1], 1.0 / 8, 1e-14);
  EXPECT_NEAR(r.rss, 10.0 / 64, 1e-14);
  EXPECT_NEAR(r.eb, 3.0 / 8 + std::log(8.0), 1e-14);
  EXPECT_NEAR(r.gcv, 4 * (10.0 / 64) / (0.75 * 0.75), 1e-14);
  EXPECT_NEAR(r.sure, 10.0 / 64 + 2 * (2 - 0.75), 1e-14);
  EXPECT_NEAR(r.gml, 2 * std::log(3.0 / 8) + std::log(8.0) - 2 * std::log(2.0), 1e-14);
}

TEST(DenseCriteria, IdentityKernel) {
  const Index n = 7;
  const double g = 0.25;
  Vec y(n);
  for (Index i = 0; i < n; ++i) y[i] = static_cast<double>(i) - 3.0;
  const auto r = dense_criteria(DenseMat::Identity(n, n), y, g);
  EXPECT_LT((r.alpha - y / (1 + g)).norm(), 1e-15);
  EXPECT_NEAR(r.logdet, n * std::log(1 + g), 1e-14);
  EXPECT_NEAR(r.trMinv, n / (1 + g), 1e-14);
}

TEST(DenseCriteria, LongDoubleAgrees) {
  const auto spec = KernelSpec::dc(0.9, 0.7);
  const auto grid = TimeGrid::uniform(40);
  const DenseMat K = dense_kernel_t<double>(spec, grid);
  Vec y = Vec::LinSpaced(40, -1.0, 1.0);
  const auto a = dense_criteria(K, y, 1e-2);
  const auto b = dense_criteria_t<long double>(K, y, 1e-2);
  EXPECT_NEAR(a.gcv / b.gcv, 1.0, 1e-10);
  EXPECT_NEAR(a.logdet / b.logdet, 1.0, 1e-12);
}

TEST(DenseCriteria, SizeLimit) {
  EXPECT_THROW(dense_criteria(DenseMat::Zero(1, 1), Vec::Zero(2), 1.0), DimensionMismatch);
}

TEST(DenseKernel, MatchesKernelValue) {
  Vec t(4);
  t << 0.5, 1.0, 2.25, 3.0;
  const TimeGrid grid(t);
  for (const auto& spec : {KernelSpec::dc(0.7, 0.4), KernelSpec::tc(0.6), KernelSpec::ss(0.8)}) {
    const DenseMat K = dense_kernel_t<double>(spec, grid);
    for (Index i = 0; i < 4; ++i)
      for (Index j = 0; j < 4; ++j) EXPECT_NEAR(K(i, j), kernel_value(spec, t[i], t[j]), 1e-15);
  }
}

TEST(DenseOutput, ImpulseIsKernelAndExponentialIsRecursion) {
  const auto spec = KernelSpec::dc(0.8, 0.6);
  const auto grid = TimeGrid::uniform(12);
  EXPECT_EQ((dense_output(spec, InputSignal::impulse(), grid) - dense_kernel_t<double>(spec, grid)).norm(), 0.0);
  const DenseMat P = dense_output(spec, InputSignal::exponential(0.5), grid);
  // direct double sum at one entry
  long double e = 0;
  for (int s = 0; s <= 5; ++s)
    for (int r = 0; r <= 9; ++r)
      e += std::pow(0.8L, s + r) * std::pow(0.6L, std::abs(s - r)) * std::exp(-0.5L * (5 - s)) *
           std::exp(-0.5L * (9 - r));
  EXPECT_NEAR(P(4, 8) / static_cast<double>(e), 1.0, 1e-14);
}

TEST(DenseOutput, NeedsIntegerTimes) {
  Vec t(2);
  t << 0.5, 1.0;
  EXPECT_THROW(dense_output_kernel_dt_t<double>(KernelSpec::dc(0.8, 0.6), 0.5, TimeGrid(t)), ValidationError);
}

TEST(ExtendedReference, FirstExampleLastEntry) {
  const auto ref = extended_example1();
  ASSERT_EQ(ref.y.size(), 5);
  const long double x[5] = {-1, 1, -1, 1, -1};
  long double y5 = 0;
  for (int j = 0; j < 5; ++j) y5 += std::pow(10.0L, 6 * (j + 1)) * x[j];
  y5 *= 1e-40L;
  EXPECT_NEAR(ref.y[4] / static_cast<double>(y5), 1.0, 1e-15);
}

TEST(ExtendedReference, SecondExampleConditioning) {
  const auto ref = extended_example2();
  EXPECT_NEAR(ref.kappa_M / 3.191245e4, 1.0, 0.01);
  EXPECT_NEAR(ref.cond_inner_max / 3.2e16, 1.0, 0.05);
  EXPECT_GE(ref.kappa_YW, 1e15);
  ASSERT_EQ(ref.tril_Linv.rows(), 5);
  // strictly lower part only
  for (Index i = 0; i < 5; ++i)
    for (Index j = i; j < 5; ++j) EXPECT_EQ(ref.tril_Linv(i, j), 0.0);
}

TEST(DoubleDouble, CompensatedArithmetic) {
  const dd a(1.0), tiny(1e-20);
  const dd s = a + tiny;
  EXPECT_EQ(static_cast<double>(s - a), 1e-20);
  const dd third = dd(1.0) / dd(3.0);
  EXPECT_NEAR(static_cast<double>(third * dd(3.0) - dd(1.0)), 0.0, 1e-31);
  EXPECT_NEAR(static_cast<double>(sqrt(dd(2.0)) * sqrt(dd(2.0)) - dd(2.0)), 0.0, 1e-30);
}
