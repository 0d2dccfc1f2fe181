#include "gvr/grbase.hpp"

#include <cmath>

namespace gvr {

Vec gr_matvec(const GRMatrix& gr, const Vec& x) { return gr_matvec_t<double>(gr.U(), gr.V(), x); }

GRCholesky gr_cholesky(const GRMatrix& gr, const Vec& d) {
  validate_diag(d, gr.rows());
  return gr_cholesky_t<double>(gr.U(), gr.V(), d);
}

Vec gr_solve_lower(const GRCholesky& L, const Vec& y) {
  const Mat X = gr_forward_t<double>(L, Mat(y));
  return X.col(0);
}

Vec gr_solve_upper(const GRCholesky& L, const Vec& y) {
  const Mat X = gr_backward_t<double>(L, Mat(y));
  return X.col(0);
}

double gr_logdet(const GRCholesky& L) {
  double acc = 0.0;
  for (Index i = 0; i < L.c.size(); ++i) acc += std::log(L.c[i]);
  return 2.0 * acc;
}

GRInverse gr_inv_chol(const GRCholesky& L, double max_condition) { return gr_inv_chol_t<double>(L, max_condition); }

DenseMat gr_inverse_to_dense(const GRInverse& inv) { return gr_inverse_to_dense_t<double>(inv); }

DenseMat gr_cholesky_to_dense(const GRCholesky& L) {
  const Index n = L.rows();
  DenseMat D = DenseMat::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    D(i, i) = L.c[i];
    for (Index j = 0; j < i; ++j) D(i, j) = L.U.row(i).dot(L.W.row(j));
  }
  return D;
}

double gr_trace_inverse(const GRInverse& inv) {
  const Index n = inv.Y.rows(), p = inv.Y.cols();
  DenseMat acc = DenseMat::Zero(p, p);  // sum_{j<i} z_j z_j^T
  Vec y(p), z(p);
  double total = 0.0;
  for (Index i = 0; i < n; ++i) {
    y = inv.Y.row(i).transpose();
    total += inv.cinv[i] * inv.cinv[i] + y.dot(acc * y);
    z = inv.Z.row(i).transpose();
    acc.noalias() += z * z.transpose();
  }
  return total;
}

double grs_trace_inverse(const GRCholesky& L) {
  const Index n = L.rows(), p = L.rank();
  Vec acc(p);
  double total = 0.0;
  for (Index k = 0; k < n; ++k) {
    acc.setZero();
    for (Index i = k; i < n; ++i) {
      const double x = ((i == k ? 1.0 : 0.0) - L.U.row(i).dot(acc)) / L.c[i];
      total += x * x;
      acc += L.W.row(i).transpose() * x;
    }
  }
  return total;
}

}  // namespace gvr
