#pragma once

// Generator-representation baselines. Templated on the scalar so the same
// recursions can run in double-double for the reference values.

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "gvr/errors.hpp"
#include "gvr/repkit.hpp"

namespace gvr {

template <class S>
using MatT = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <class S>
using VecT = Eigen::Matrix<S, Eigen::Dynamic, 1>;

// L = tril(U W^T, -1) + diag(c).
template <class S>
struct GRCholeskyT {
  MatT<S> U, W;
  VecT<S> c;
  Index rows() const { return U.rows(); }
  Index rank() const { return U.cols(); }
};

// L^{-1} = tril(Y Z^T, -1) + diag(cinv); condition is cond(Y^T W - I).
template <class S>
struct GRInverseT {
  MatT<S> Y, Z;
  VecT<S> cinv;
  double condition = 0.0;
};

using GRCholesky = GRCholeskyT<double>;
using GRInverse = GRInverseT<double>;

namespace detail {

inline double to_double(double x) { return x; }
template <class S>
double to_double(const S& x) {
  return static_cast<double>(x);
}

template <class S>
double condition_number(const MatT<S>& G) {
  using std::abs;
  using std::sqrt;
  const Index p = G.rows();
  for (Index a = 0; a < p; ++a)
    for (Index b = 0; b < p; ++b)
      if (!std::isfinite(to_double(G(a, b)))) return std::numeric_limits<double>::infinity();
  if (p == 1) return G(0, 0) == S(0.0) ? std::numeric_limits<double>::infinity() : 1.0;
  if (p == 2) {
    // sigma_max^2 / |det| from the 2x2 singular values, all in S.
    const S det = abs(G(0, 0) * G(1, 1) - G(0, 1) * G(1, 0));
    if (det == S(0.0)) return std::numeric_limits<double>::infinity();
    const S fro2 = G(0, 0) * G(0, 0) + G(0, 1) * G(0, 1) + G(1, 0) * G(1, 0) + G(1, 1) * G(1, 1);
    S disc = fro2 * fro2 - S(4.0) * det * det;
    if (disc < S(0.0)) disc = S(0.0);
    const S smax2 = (fro2 + sqrt(disc)) / S(2.0);
    return to_double(smax2 / det);
  }
  Eigen::MatrixXd Gd(p, p);
  for (Index a = 0; a < p; ++a)
    for (Index b = 0; b < p; ++b) Gd(a, b) = to_double(G(a, b));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Gd);
  const auto& sv = svd.singularValues();
  if (sv[p - 1] == 0.0) return std::numeric_limits<double>::infinity();
  return sv[0] / sv[p - 1];
}

}  // namespace detail

// Partial-sum recursion: mu_bar starts at U^T x and loses one term per step.
template <class S>
VecT<S> gr_matvec_t(const MatT<S>& U, const MatT<S>& V, const VecT<S>& x) {
  const Index n = U.rows(), p = U.cols();
  if (x.size() != n) throw DimensionMismatch("gr_matvec: vector length does not match matrix order");
  VecT<S> mub = VecT<S>::Zero(p), nub = VecT<S>::Zero(p), y(n);
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k < p; ++k) mub[k] += U(i, k) * x[i];
  for (Index i = 0; i < n; ++i) {
    S acc(0.0);
    for (Index k = 0; k < p; ++k) {
      mub[k] -= U(i, k) * x[i];
      nub[k] += V(i, k) * x[i];
      acc += U(i, k) * nub[k] + V(i, k) * mub[k];
    }
    y[i] = acc;
  }
  return y;
}

template <class S>
GRCholeskyT<S> gr_cholesky_t(const MatT<S>& U, const MatT<S>& V, const VecT<S>& d) {
  using std::sqrt;
  const Index n = U.rows(), p = U.cols();
  if (d.size() != n) throw DimensionMismatch("gr_cholesky: diagonal length does not match matrix order");
  GRCholeskyT<S> L{U, MatT<S>(n, p), VecT<S>(n)};
  MatT<S> Q = MatT<S>::Zero(p, p);
  VecT<S> Qu(p);
  for (Index i = 0; i < n; ++i) {
    S c2 = d[i];
    for (Index a = 0; a < p; ++a) {
      S acc(0.0);
      for (Index b = 0; b < p; ++b) acc += Q(a, b) * U(i, b);
      Qu[a] = acc;
    }
    for (Index a = 0; a < p; ++a) c2 += U(i, a) * V(i, a) - U(i, a) * Qu[a];
    if (!(c2 > S(0.0))) throw NotPositiveDefinite(static_cast<std::size_t>(i), "GR Cholesky");
    const S c = sqrt(c2);
    L.c[i] = c;
    for (Index a = 0; a < p; ++a) L.W(i, a) = (V(i, a) - Qu[a]) / c;
    for (Index a = 0; a < p; ++a)
      for (Index b = 0; b < p; ++b) Q(a, b) += L.W(i, a) * L.W(i, b);
  }
  return L;
}

// X = L^{-1} B, B with N rows.
template <class S>
MatT<S> gr_forward_t(const GRCholeskyT<S>& L, const MatT<S>& B) {
  const Index n = L.rows(), p = L.rank(), m = B.cols();
  if (B.rows() != n) throw DimensionMismatch("gr forward solve: row count mismatch");
  MatT<S> X(n, m), acc = MatT<S>::Zero(p, m);  // acc = sum_{j<i} w_j x_j^T
  for (Index i = 0; i < n; ++i) {
    for (Index b = 0; b < m; ++b) {
      S v = B(i, b);
      for (Index a = 0; a < p; ++a) v -= L.U(i, a) * acc(a, b);
      X(i, b) = v / L.c[i];
    }
    for (Index a = 0; a < p; ++a)
      for (Index b = 0; b < m; ++b) acc(a, b) += L.W(i, a) * X(i, b);
  }
  return X;
}

// X = L^{-T} B.
template <class S>
MatT<S> gr_backward_t(const GRCholeskyT<S>& L, const MatT<S>& B) {
  const Index n = L.rows(), p = L.rank(), m = B.cols();
  if (B.rows() != n) throw DimensionMismatch("gr backward solve: row count mismatch");
  MatT<S> X(n, m), acc = MatT<S>::Zero(p, m);  // acc = sum_{j>i} u_j x_j^T
  for (Index i = n - 1; i >= 0; --i) {
    for (Index b = 0; b < m; ++b) {
      S v = B(i, b);
      for (Index a = 0; a < p; ++a) v -= L.W(i, a) * acc(a, b);
      X(i, b) = v / L.c[i];
    }
    for (Index a = 0; a < p; ++a)
      for (Index b = 0; b < m; ++b) acc(a, b) += L.U(i, a) * X(i, b);
  }
  return X;
}

// Y = L^{-1} U, Z = L^{-T} W (Y^T W - I)^{-1}. Throws SingularYW above max_condition.
template <class S>
GRInverseT<S> gr_inv_chol_t(const GRCholeskyT<S>& L, double max_condition = 1e15) {
  const Index p = L.rank();
  GRInverseT<S> inv;
  inv.Y = gr_forward_t(L, L.U);
  MatT<S> G = inv.Y.transpose() * L.W;
  for (Index a = 0; a < p; ++a) G(a, a) -= S(1.0);
  inv.condition = detail::condition_number(G);
  if (!(inv.condition <= max_condition)) throw SingularYW(inv.condition);
  const MatT<S> X = gr_backward_t(L, L.W);
  const MatT<S> Gi = G.inverse();
  inv.Z = X * Gi;
  inv.cinv = L.c.cwiseInverse();
  return inv;
}

// Dense tril(Y Z^T, -1) + diag(cinv).
template <class S>
MatT<S> gr_inverse_to_dense_t(const GRInverseT<S>& inv) {
  const Index n = inv.Y.rows(), p = inv.Y.cols();
  MatT<S> T = MatT<S>::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    T(i, i) = inv.cinv[i];
    for (Index j = 0; j < i; ++j) {
      S acc(0.0);
      for (Index k = 0; k < p; ++k) acc += inv.Y(i, k) * inv.Z(j, k);
      T(i, j) = acc;
    }
  }
  return T;
}

// Double-precision entry points.
Vec gr_matvec(const GRMatrix& gr, const Vec& x);
GRCholesky gr_cholesky(const GRMatrix& gr, const Vec& d);
Vec gr_solve_lower(const GRCholesky& L, const Vec& y);
Vec gr_solve_upper(const GRCholesky& L, const Vec& y);
double gr_logdet(const GRCholesky& L);
GRInverse gr_inv_chol(const GRCholesky& L, double max_condition = 1e15);
DenseMat gr_inverse_to_dense(const GRInverse& inv);
DenseMat gr_cholesky_to_dense(const GRCholesky& L);

// tr((A+D)^{-1}) = ||L^{-1}||_F^2 from the GR of L^{-1}, O(Np^2).
double gr_trace_inverse(const GRInverse& inv);
// Same quantity column by column with forward substitutions, O(N^2 p).
double grs_trace_inverse(const GRCholesky& L);

}  // namespace gvr
