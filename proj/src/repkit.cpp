#include "gvr/repkit.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

#include "gvr/errors.hpp"

namespace gvr {

namespace {

bool all_finite(const Mat& m) { return m.array().isFinite().all(); }

void write_rows(std::ostream& os, const std::vector<std::pair<std::string, const Mat*>>& blocks) {
  const auto old = os.precision(17);
  os << "i";
  for (const auto& [name, m] : blocks)
    for (Index k = 0; k < m->cols(); ++k) os << ',' << name << '_' << k + 1;
  os << '\n';
  const Index n = blocks.front().second->rows();
  for (Index i = 0; i < n; ++i) {
    os << i + 1;
    for (const auto& [name, m] : blocks)
      for (Index k = 0; k < m->cols(); ++k) os << ',' << (*m)(i, k);
    os << '\n';
  }
  os.precision(old);
}

}  // namespace

TimeGrid::TimeGrid(Vec t) : t_(std::move(t)) {
  if (t_.size() < 1) throw ValidationError("time grid must have at least one sample");
  if (!t_.array().isFinite().all()) throw ValidationError("time grid has non-finite samples");
  for (Index i = 0; i + 1 < t_.size(); ++i)
    if (!(t_[i] < t_[i + 1])) throw ValidationError("time grid must be strictly increasing");

  const double step = t_[0];
  if (step > 0) {
    bool eq = true;
    for (Index i = 0; i < t_.size() && eq; ++i) {
      const double expect = step * static_cast<double>(i + 1);
      eq = std::abs(t_[i] - expect) <= 1e-12 * std::abs(expect);
    }
    equispaced_ = eq;
    step_ = eq ? step : 0.0;
  }
}

TimeGrid TimeGrid::uniform(Index n, double step) {
  if (n < 1 || !(step > 0)) throw ValidationError("uniform grid needs n >= 1 and step > 0");
  Vec t(n);
  for (Index i = 0; i < n; ++i) t[i] = step * static_cast<double>(i + 1);
  return TimeGrid(std::move(t));
}

GRMatrix::GRMatrix(Mat U, Mat V) : U_(std::move(U)), V_(std::move(V)) {
  if (U_.rows() < 1 || U_.cols() < 1) throw ValidationError("GR generators must be non-empty");
  if (U_.rows() != V_.rows() || U_.cols() != V_.cols())
    throw DimensionMismatch("GR generators U and V differ in shape");
  if (!all_finite(U_) || !all_finite(V_)) throw ValidationError("GR generators contain NaN or Inf");
}

GvRMatrix::GvRMatrix(Mat C, Mat S, Mat nu) : C_(std::move(C)), S_(std::move(S)), nu_(std::move(nu)) {
  const Index n = C_.rows(), p = C_.cols();
  if (n < 1 || p < 1) throw ValidationError("GvR must be non-empty");
  if (S_.rows() != n || S_.cols() != p || nu_.rows() != n || nu_.cols() != p)
    throw DimensionMismatch("GvR blocks differ in shape");
  if (!all_finite(C_) || !all_finite(S_) || !all_finite(nu_))
    throw ValidationError("GvR contains NaN or Inf");
  if (S_.row(n - 1).cwiseAbs().maxCoeff() != 0.0) throw ValidationError("GvR row N of s must be zero");
  for (Index i = 0; i + 1 < n; ++i)
    for (Index k = 0; k < p; ++k) {
      const double c = C_(i, k), s = S_(i, k);
      if (std::abs(c * c + s * s - 1.0) > 1e-10)
        throw ValidationError("GvR rotation (" + std::to_string(i + 1) + "," + std::to_string(k + 1) +
                              ") is not normalised");
    }
}

GvRMatrix GvRMatrix::zero(Index n, Index p) {
  return GvRMatrix(Mat::Ones(n, p), Mat::Zero(n, p), Mat::Zero(n, p));
}

GvRMatrix gr_to_gvr(const GRMatrix& gr) {
  const Index n = gr.rows(), p = gr.rank();
  const Mat& U = gr.U();
  const Mat& V = gr.V();
  Mat C = Mat::Ones(n, p), S = Mat::Zero(n, p), nu = Mat::Zero(n, p);
  for (Index k = 0; k < p; ++k) {
    // The last rotation keeps the sign of mu_N so that c_N stays 1.
    double r = U(n - 1, k);
    nu(n - 1, k) = U(n - 1, k) * V(n - 1, k);
    for (Index i = n - 2; i >= 0; --i) {
      const double ri = std::hypot(U(i, k), r);
      if (ri == 0.0) {
        C(i, k) = 1.0;
        S(i, k) = 0.0;
        nu(i, k) = 0.0;
      } else {
        // rotation from the ratio, so it stays normalised when U and r are subnormal
        const double a = U(i, k);
        if (std::abs(a) >= std::abs(r)) {
          const double t = r / a;
          C(i, k) = std::copysign(1.0 / std::sqrt(1.0 + t * t), a);
          S(i, k) = t * C(i, k);
        } else {
          const double t = a / r;
          S(i, k) = std::copysign(1.0 / std::sqrt(1.0 + t * t), r);
          C(i, k) = t * S(i, k);
        }
        nu(i, k) = V(i, k) * ri;
      }
      r = ri;
    }
  }
  return GvRMatrix(std::move(C), std::move(S), std::move(nu));
}

DenseMat gvr_to_dense(const GvRMatrix& a) {
  const Index n = a.rows(), p = a.rank();
  DenseMat A(n, n);
  Vec v(p);
  for (Index j = 0; j < n; ++j) {
    v = a.nu().row(j).transpose();
    for (Index i = j; i < n; ++i) {
      A(i, j) = a.C().row(i).dot(v);
      A(j, i) = A(i, j);
      v.array() *= a.S().row(i).transpose().array();
    }
  }
  return A;
}

DenseMat gr_to_dense(const GRMatrix& gr) {
  const Index n = gr.rows();
  DenseMat A(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = j; i < n; ++i) {
      A(i, j) = gr.U().row(i).dot(gr.V().row(j));
      A(j, i) = A(i, j);
    }
  return A;
}

DenseMat cholesky_to_dense(const GvRCholesky& chol) {
  const Index n = chol.rows(), p = chol.rank();
  DenseMat L = DenseMat::Zero(n, n);
  Vec v(p);
  for (Index j = 0; j < n; ++j) {
    L(j, j) = chol.f[j];
    v = chol.W.row(j).transpose();
    for (Index i = j + 1; i < n; ++i) {
      v.array() *= chol.S.row(i - 1).transpose().array();
      L(i, j) = chol.C.row(i).dot(v);
    }
  }
  return L;
}

DenseMat inverse_to_dense(const InvCholRep& inv) {
  const Index n = inv.fBar.size();
  DenseMat T = DenseMat::Zero(n, n);
  Vec v;
  for (Index j = 0; j < n; ++j) {
    T(j, j) = inv.fBar[j];
    if (j + 1 >= n) continue;
    v = inv.WBar.row(j).transpose();
    for (Index i = j + 1; i < n; ++i) {
      v = inv.SBar[static_cast<std::size_t>(i - 1)] * v;
      T(i, j) = inv.CBar.row(i).dot(v);
    }
  }
  return T;
}

void validate_diag(const Vec& d, Index n) {
  if (d.size() != n) throw DimensionMismatch("diagonal length does not match matrix order");
  for (Index i = 0; i < n; ++i)
    if (!std::isfinite(d[i]) || d[i] < 0.0) throw ValidationError("diagonal entries must be finite and >= 0");
}

void write_csv(std::ostream& os, const GRMatrix& gr) { write_rows(os, {{"mu", &gr.U()}, {"nu", &gr.V()}}); }

void write_csv(std::ostream& os, const GvRMatrix& a) {
  write_rows(os, {{"c", &a.C()}, {"s", &a.S()}, {"nuhat", &a.nu()}});
}

void write_csv(std::ostream& os, const GvRCholesky& chol) {
  Mat f = chol.f;
  write_rows(os, {{"c", &chol.C}, {"s", &chol.S}, {"w", &chol.W}, {"f", &f}});
}

}  // namespace gvr
