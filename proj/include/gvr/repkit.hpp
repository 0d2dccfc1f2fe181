#pragma once

#include <iosfwd>
#include <vector>

#include "gvr/types.hpp"

namespace gvr {

// Strictly increasing sample times t_1 < ... < t_N.
class TimeGrid {
 public:
  explicit TimeGrid(Vec t);
  // t_i = step * i for i = 1..n
  static TimeGrid uniform(Index n, double step = 1.0);

  Index size() const { return t_.size(); }
  const Vec& t() const { return t_; }
  double operator[](Index i) const { return t_[i]; }
  bool equispaced() const { return equispaced_; }
  double step() const { return step_; }

 private:
  Vec t_;
  bool equispaced_ = false;
  double step_ = 0.0;
};

// A = tril(U V^T) + triu(V U^T, 1); row i of U is mu_i, row i of V is nu_i.
class GRMatrix {
 public:
  GRMatrix(Mat U, Mat V);

  Index rows() const { return U_.rows(); }
  Index rank() const { return U_.cols(); }
  const Mat& U() const { return U_; }
  const Mat& V() const { return V_; }

 private:
  Mat U_, V_;
};

// A(i,j) = c_i^T S_{i-1} ... S_j nu_j for j <= i, S_k = diag(s_k).
// Row N of S is zero; c_N = 1 for matrices produced by gr_to_gvr.
class GvRMatrix {
 public:
  GvRMatrix(Mat C, Mat S, Mat nu);
  // The zero matrix as a valid representation (c = 1, s = 0, nu = 0).
  static GvRMatrix zero(Index n, Index p = 1);

  Index rows() const { return C_.rows(); }
  Index rank() const { return C_.cols(); }
  const Mat& C() const { return C_; }
  const Mat& S() const { return S_; }
  const Mat& nu() const { return nu_; }

 private:
  Mat C_, S_, nu_;
};

// L(i,i) = f_i, L(i,j) = c_i^T S_{i-1} ... S_j w_j for j < i.
// W keeps all N rows; the last one is produced by the recursion but never used.
struct GvRCholesky {
  Mat C, S, W;
  Vec f;

  Index rows() const { return C.rows(); }
  Index rank() const { return C.cols(); }
};

// Implicit L^{-1}: diag fbar, strictly lower part cbar_i^T Sbar_{i-1} ... Sbar_j wbar_j.
struct InvCholRep {
  Mat CBar;
  std::vector<DenseMat> SBar;  // N-1 dense p x p blocks
  Mat WBar;                    // N-1 rows
  Vec fBar;
};

GvRMatrix gr_to_gvr(const GRMatrix& gr);

DenseMat gvr_to_dense(const GvRMatrix& a);
DenseMat gr_to_dense(const GRMatrix& gr);
DenseMat cholesky_to_dense(const GvRCholesky& chol);
DenseMat inverse_to_dense(const InvCholRep& inv);

// Throws ValidationError unless every d_i is finite and >= 0.
void validate_diag(const Vec& d, Index n);

void write_csv(std::ostream& os, const GRMatrix& gr);
void write_csv(std::ostream& os, const GvRMatrix& a);
void write_csv(std::ostream& os, const GvRCholesky& chol);

}  // namespace gvr
