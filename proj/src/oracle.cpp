#include "gvr/oracle.hpp"

#include <algorithm>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "gvr/double_double.hpp"
#include "gvr/grbase.hpp"

namespace gvr {

namespace {

template <class Derived>
DenseMat to_double(const Eigen::MatrixBase<Derived>& m) {
  DenseMat out(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).to_double();
  return out;
}

}  // namespace

DenseMat dense_output(const KernelSpec& spec, const InputSignal& input, const TimeGrid& grid) {
  if (input.kind == InputSignal::Kind::UnitImpulse) return dense_kernel_t<double>(spec, grid);
  if (input.domain == Domain::DT) return dense_output_kernel_dt_t<double>(spec, input.alpha, grid);
  return gvr_to_dense(output_kernel_gvr(spec, input, grid));
}

CriterionReport dense_criteria(const DenseMat& Psi, const Vec& y, double gamma) {
  return dense_criteria_t<double>(Psi, y, gamma);
}

Example1Reference extended_example1() {
  Example1Reference ref;
  const Index n = 5;
  ref.x = Vec(n);
  ref.x << -1, 1, -1, 1, -1;
  const dd lam(ref.lambda), rho(ref.rho);
  ref.y = Vec(n);
  for (Index i = 1; i <= n; ++i) {
    dd acc(0.0);
    for (Index j = 1; j <= n; ++j) {
      const auto gap = static_cast<unsigned>(i > j ? i - j : j - i);
      acc += pow_int(lam, static_cast<unsigned>(i + j)) * pow_int(rho, gap) * dd(ref.x[j - 1]);
    }
    ref.y[i - 1] = acc.to_double();
  }
  return ref;
}

Example2Reference extended_example2() {
  Example2Reference ref;
  const Index n = 5;
  const dd rho(ref.rho), gamma(ref.gamma);

  DenseT<dd> M(n, n);
  for (Index i = 1; i <= n; ++i)
    for (Index j = 1; j <= n; ++j) {
      const auto m = static_cast<unsigned>(std::max(i, j));
      M(i - 1, j - 1) = pow_int(rho, static_cast<unsigned>(i + j) + m) / dd(2.0) - pow_int(rho, 3 * m) / dd(6.0);
    }
  M.diagonal().array() += gamma;

  Eigen::LLT<DenseT<dd>> llt(M);
  if (llt.info() != Eigen::Success) throw NotPositiveDefinite(0, "double-double Cholesky");
  const DenseT<dd> Li = llt.matrixL().solve(DenseT<dd>::Identity(n, n));
  const DenseT<dd> Minv = Li.transpose() * Li;
  ref.tril_Linv = to_double(Li).triangularView<Eigen::StrictlyLower>();

  const DenseMat Md = to_double(M), Mid = to_double(Minv);
  Eigen::SelfAdjointEigenSolver<DenseMat> e1(Md, Eigen::EigenvaluesOnly), e2(Mid, Eigen::EigenvaluesOnly);
  ref.kappa_M = e1.eigenvalues().maxCoeff() * e2.eigenvalues().maxCoeff();

  MatT<dd> U(n, 2), V(n, 2);
  VecT<dd> d(n);
  for (Index i = 1; i <= n; ++i) {
    const auto t = static_cast<unsigned>(i);
    U(i - 1, 0) = -pow_int(rho, 3 * t) / dd(6.0);
    U(i - 1, 1) = pow_int(rho, 2 * t) / dd(2.0);
    V(i - 1, 0) = dd(1.0);
    V(i - 1, 1) = pow_int(rho, t);
    d[i - 1] = gamma;
  }
  const auto L = gr_cholesky_t<dd>(U, V, d);
  const auto inv = gr_inv_chol_t<dd>(L, std::numeric_limits<double>::infinity());
  ref.kappa_YW = inv.condition;
  ref.Y = to_double(inv.Y);
  ref.Z = to_double(inv.Z);

  ref.cond_inner = DenseMat::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < i; ++j) {
      dd num(0.0), den(0.0);
      for (Index k = 0; k < 2; ++k) {
        num += abs(inv.Y(i, k)) * abs(inv.Z(j, k));
        den += inv.Y(i, k) * inv.Z(j, k);
      }
      ref.cond_inner(i, j) = (num / abs(den)).to_double();
    }
  ref.cond_inner_max = ref.cond_inner.maxCoeff();
  return ref;
}

}  // namespace gvr
