#pragma once

// Dense O(N^3) references and the extended-precision fixture evaluators.

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "gvr/criteria.hpp"
#include "gvr/errors.hpp"
#include "gvr/kernels.hpp"

namespace gvr {

template <class T>
using DenseT = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <class T>
using DenseVecT = Eigen::Matrix<T, Eigen::Dynamic, 1>;

inline constexpr Index kDenseLimit = 5000;

// Kernel matrix from the entry formula.
template <class T>
DenseT<T> dense_kernel_t(const KernelSpec& spec, const TimeGrid& grid) {
  spec.validate();
  using std::abs;
  using std::exp;
  using std::log;
  using std::max;
  const Index n = grid.size();
  DenseT<T> K(n, n);
  const T lr = log(T(spec.rho));
  const T ll = log(T(spec.dc_lambda()));
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j <= i; ++j) {
      const T t = grid[i], s = grid[j];
      T v;
      if (spec.family == KernelSpec::Family::SS) {
        const T m = max(t, s);
        v = exp((t + s + m) * lr) / T(2) - exp(T(3) * m * lr) / T(6);
      } else {
        v = exp((t + s) * ll + abs(t - s) * lr);
      }
      K(i, j) = v;
      K(j, i) = v;
    }
  return K;
}

// DT output kernel for u(t) = exp(-alpha t) on integer sample times, through
// positive-term recursions over the integer lattice 0..t_N:
//   B(t, .) = e^{-alpha} B(t-1, .) + K(t, .),  Psi(t, t') = e^{-alpha} Psi(t, t'-1) + B(t, t').
template <class T>
DenseT<T> dense_output_kernel_dt_t(const KernelSpec& spec, double alpha, const TimeGrid& grid) {
  spec.validate();
  if (spec.family == KernelSpec::Family::SS) throw ValidationError("dense output kernel supports DC/TC only");
  using std::exp;
  using std::log;
  const Index n = grid.size();
  std::vector<Index> idx(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const double t = grid[i];
    if (t < 0.0 || t != std::floor(t)) throw ValidationError("DT output kernel needs integer sample times");
    idx[static_cast<std::size_t>(i)] = static_cast<Index>(t);
  }
  const Index m = idx.back() + 1;
  std::vector<Index> row_of(static_cast<std::size_t>(m), -1);
  for (Index i = 0; i < n; ++i) row_of[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])] = i;

  const T ea = exp(T(-alpha));
  const T ll = log(T(spec.dc_lambda())), lr = log(T(spec.rho));
  DenseVecT<T> B = DenseVecT<T>::Zero(m);
  DenseT<T> Psi(n, n);
  for (Index t = 0; t < m; ++t) {
    for (Index r = 0; r < m; ++r) {
      const Index dt = t > r ? t - r : r - t;
      B[r] = ea * B[r] + exp(T(t + r) * ll + T(dt) * lr);
    }
    const Index i = row_of[static_cast<std::size_t>(t)];
    if (i < 0) continue;
    T acc(0);
    for (Index r = 0; r < m; ++r) {
      acc = ea * acc + B[r];
      const Index j = row_of[static_cast<std::size_t>(r)];
      if (j >= 0) Psi(i, j) = acc;
    }
  }
  return Psi;
}

// Dense Psi in double for any supported (kernel, input). DT exponential input uses the
// recursion above; CT exponential input falls back to the closed-form GvR.
DenseMat dense_output(const KernelSpec& spec, const InputSignal& input, const TimeGrid& grid);

// Dense criteria: Cholesky of Psi + gamma I, triangular solves, tr(M^{-1}) = ||L^{-1}||_F^2.
template <class T>
CriterionReport dense_criteria_t(const DenseMat& Psi, const Vec& y, double gamma) {
  const Index n = Psi.rows();
  if (n > kDenseLimit) throw ValidationError("dense oracle is limited to N <= 5000");
  if (Psi.cols() != n || y.size() != n) throw DimensionMismatch("dense_criteria: shape mismatch");
  DenseT<T> M = Psi.cast<T>();
  M.diagonal().array() += T(gamma);
  Eigen::LLT<DenseT<T>> llt(M);
  if (llt.info() != Eigen::Success) throw NotPositiveDefinite(0, "dense Cholesky");
  const DenseVecT<T> yt = y.cast<T>();
  const DenseVecT<T> a = llt.solve(yt);
  const DenseVecT<T> yh = Psi.cast<T>() * a;
  const DenseT<T> L = llt.matrixL();
  T ld(0);
  for (Index i = 0; i < n; ++i) {
    if (!(L(i, i) > T(0))) throw NotPositiveDefinite(static_cast<std::size_t>(i), "dense Cholesky");
    ld += std::log(L(i, i));
  }
  const DenseT<T> Li = llt.matrixL().solve(DenseT<T>::Identity(n, n));
  const T tr = Li.squaredNorm();
  return make_report(y, a.template cast<double>(), yh.template cast<double>(), static_cast<double>(T(2) * ld),
                     static_cast<double>(tr), gamma);
}

// The Ref method (double precision).
CriterionReport dense_criteria(const DenseMat& Psi, const Vec& y, double gamma);

// DC lambda = 0.1, rho = 1e-7, t = 1..5, x = (-1, 1, -1, 1, -1): y = K x in double-double.
struct Example1Reference {
  double lambda = 0.1, rho = 1e-7;
  Vec x, y;
};
Example1Reference extended_example1();

// SS rho = 0.5, gamma = 1e-8, t = 1..5.
struct Example2Reference {
  double rho = 0.5, gamma = 1e-8;
  double kappa_M = 0.0;   // lambda_max(M) lambda_max(M^{-1})
  double kappa_YW = 0.0;  // cond(Y^T W - I_2) of the double-double GR route
  DenseMat tril_Linv;     // tril(L^{-1}, -1) from a double-double dense Cholesky
  DenseMat Y, Z;          // double-double GR of L^{-1}, rounded
  DenseMat cond_inner;    // |y_i|^T |z_j| / |y_i^T z_j| for i > j
  double cond_inner_max = 0.0;
};
Example2Reference extended_example2();

}  // namespace gvr
