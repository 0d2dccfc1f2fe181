#include "gvr/fastalg.hpp"

#include <cmath>

#include "gvr/errors.hpp"

namespace gvr {

namespace {

void check_len(Index got, Index want, const char* what) {
  if (got != want) throw DimensionMismatch(std::string(what) + ": vector length does not match matrix order");
}

}  // namespace

Vec matvec(const GvRMatrix& a, const Vec& x) {
  const Index n = a.rows(), p = a.rank();
  check_len(x.size(), n, "matvec");
  const Mat& C = a.C();
  const Mat& S = a.S();
  const Mat& nu = a.nu();
  Vec y(n);
  Vec chi = Vec::Zero(p);
  for (Index i = 0; i < n; ++i) {
    y[i] = C.row(i).dot(chi) + C.row(i).dot(nu.row(i)) * x[i];
    if (i + 1 < n) chi = S.row(i).transpose().cwiseProduct(chi + nu.row(i).transpose() * x[i]);
  }
  chi.setZero();
  for (Index i = n - 1; i >= 0; --i) {
    y[i] += nu.row(i).dot(chi);
    if (i > 0) chi = S.row(i - 1).transpose().cwiseProduct(chi + C.row(i).transpose() * x[i]);
  }
  return y;
}

GvRCholesky cholesky(const GvRMatrix& a, const Vec& d) {
  const Index n = a.rows(), p = a.rank();
  validate_diag(d, n);
  GvRCholesky L{a.C(), a.S(), Mat(n, p), Vec(n)};
  DenseMat P = DenseMat::Zero(p, p);
  Vec w(p), c(p), s(p);
  for (Index i = 0; i < n; ++i) {
    c = a.C().row(i).transpose();
    w = a.nu().row(i).transpose() - P * c;
    const double rad = c.dot(w) + d[i];
    const double scale = c.dot(a.nu().row(i).transpose()) + d[i];
    if (!(rad > 0.0) || rad <= 1e-14 * std::abs(scale)) throw NotPositiveDefinite(static_cast<std::size_t>(i));
    const double f = std::sqrt(rad);
    L.f[i] = f;
    w /= f;
    L.W.row(i) = w.transpose();
    if (i + 1 < n) {
      s = a.S().row(i).transpose();
      P.noalias() += w * w.transpose();
      P = s.asDiagonal() * P * s.asDiagonal();
    }
  }
  return L;
}

double logdet(const GvRCholesky& chol) {
  double acc = 0.0;
  for (Index i = 0; i < chol.f.size(); ++i) acc += std::log(chol.f[i]);
  return 2.0 * acc;
}

Vec tri_matvec_lower(const GvRCholesky& chol, const Vec& x) {
  const Index n = chol.rows();
  check_len(x.size(), n, "tri_matvec_lower");
  Vec y(n), chi = Vec::Zero(chol.rank());
  for (Index i = 0; i < n; ++i) {
    y[i] = chol.C.row(i).dot(chi) + chol.f[i] * x[i];
    if (i + 1 < n) chi = chol.S.row(i).transpose().cwiseProduct(chi + chol.W.row(i).transpose() * x[i]);
  }
  return y;
}

Vec tri_matvec_upper(const GvRCholesky& chol, const Vec& x) {
  const Index n = chol.rows();
  check_len(x.size(), n, "tri_matvec_upper");
  Vec y(n), chi = Vec::Zero(chol.rank());
  for (Index i = n - 1; i >= 0; --i) {
    y[i] = chol.W.row(i).dot(chi) + chol.f[i] * x[i];
    if (i > 0) chi = chol.S.row(i - 1).transpose().cwiseProduct(chi + chol.C.row(i).transpose() * x[i]);
  }
  return y;
}

Vec solve_lower(const GvRCholesky& chol, const Vec& y) {
  const Index n = chol.rows();
  check_len(y.size(), n, "solve_lower");
  Vec x(n), chi = Vec::Zero(chol.rank());
  for (Index i = 0; i < n; ++i) {
    x[i] = (y[i] - chol.C.row(i).dot(chi)) / chol.f[i];
    if (i + 1 < n) chi = chol.S.row(i).transpose().cwiseProduct(chi + chol.W.row(i).transpose() * x[i]);
  }
  return x;
}

Vec solve_upper(const GvRCholesky& chol, const Vec& y) {
  const Index n = chol.rows();
  check_len(y.size(), n, "solve_upper");
  Vec x(n), chi = Vec::Zero(chol.rank());
  for (Index i = n - 1; i >= 0; --i) {
    x[i] = (y[i] - chol.W.row(i).dot(chi)) / chol.f[i];
    if (i > 0) chi = chol.S.row(i - 1).transpose().cwiseProduct(chi + chol.C.row(i).transpose() * x[i]);
  }
  return x;
}

InvCholRep inv_chol_rep(const GvRCholesky& chol, const Vec& d) {
  const Index n = chol.rows(), p = chol.rank();
  validate_diag(d, n);
  for (Index i = 0; i < n; ++i)
    if (!(d[i] > 0.0)) throw DegenerateDiagonal("inverse factor needs d_i > 0 (index " + std::to_string(i) + ")");
  InvCholRep inv;
  inv.fBar = chol.f.cwiseInverse();
  inv.CBar = Mat(n, p);
  for (Index i = 0; i < n; ++i) inv.CBar.row(i) = -chol.C.row(i) / chol.f[i];
  inv.WBar = Mat(std::max<Index>(n - 1, 0), p);
  inv.SBar.reserve(static_cast<std::size_t>(std::max<Index>(n - 1, 0)));
  const DenseMat I = DenseMat::Identity(p, p);
  for (Index i = 0; i + 1 < n; ++i) {
    const Vec w = chol.W.row(i).transpose();
    const Vec c = chol.C.row(i).transpose();
    const double f = chol.f[i];
    inv.SBar.push_back(chol.S.row(i).transpose().asDiagonal() * (I - w * c.transpose() / f));
    // f^{-1} (I - w c^T / f)^{-1} w = w / (f - c^T w); the denominator is taken from the stored
    // factor in extended precision so that Sbar_i wbar_i = S_i w_i / f_i holds to rounding.
    long double den = f;
    for (Index k = 0; k < p; ++k) den -= static_cast<long double>(c[k]) * w[k];
    if (!(den > 0.0L)) den = d[i] / f;
    inv.WBar.row(i) = (w / static_cast<double>(den)).transpose();
  }
  return inv;
}

Vec diag_inverse(const GvRCholesky& chol) {
  const Index n = chol.rows(), p = chol.rank();
  Vec b(n);
  DenseMat P(p, p), R = DenseMat::Zero(p, p);
  Vec pv = Vec::Zero(p), c(p), s(p);
  b[n - 1] = 1.0 / (chol.f[n - 1] * chol.f[n - 1]);
  for (Index i = n - 2; i >= 0; --i) {
    c = chol.C.row(i + 1).transpose();
    const double f1 = chol.f[i + 1];
    P.noalias() = b[i + 1] * c * c.transpose();
    P.noalias() -= (c * pv.transpose() + pv * c.transpose()) / f1;
    P += R;
    s = chol.S.row(i).transpose();
    R = s.asDiagonal() * P * s.asDiagonal();
    pv.noalias() = R * chol.W.row(i).transpose();
    b[i] = (1.0 + chol.W.row(i).dot(pv)) / (chol.f[i] * chol.f[i]);
  }
  return b;
}

double trace_form(const GvRCholesky& chol, const GvRMatrix& at, const Vec& dt) {
  const Index n = chol.rows(), p = chol.rank(), pt = at.rank();
  if (at.rows() != n) throw DimensionMismatch("trace_form: At order does not match the factor");
  check_len(dt.size(), n, "trace_form");
  DenseMat P = DenseMat::Zero(p, p), R = DenseMat::Zero(pt, p);
  Vec pv(p), r(p), c(p), w(p), ct(pt), u(pt), s(p), st(pt);
  double total = 0.0;
  for (Index i = 0; i < n; ++i) {
    c = chol.C.row(i).transpose();
    w = chol.W.row(i).transpose();
    ct = at.C().row(i).transpose();
    const double f = chol.f[i];
    pv.noalias() = P * c;
    r.noalias() = R.transpose() * ct;
    const double q = (c.dot(pv) - 2.0 * r.dot(c) + ct.dot(at.nu().row(i).transpose()) + dt[i]) / (f * f);
    total += q;
    if (i + 1 == n) break;
    s = chol.S.row(i).transpose();
    st = at.S().row(i).transpose();
    u.noalias() = at.nu().row(i).transpose() - R * c;
    R.noalias() += u * w.transpose() / f;
    R = st.asDiagonal() * R * s.asDiagonal();
    r -= pv;
    P.noalias() += (r * w.transpose() + w * r.transpose()) / f + q * w * w.transpose();
    P = s.asDiagonal() * P * s.asDiagonal();
  }
  return total;
}

double trace_inverse(const GvRCholesky& chol) {
  const Index n = chol.rows();
  return trace_form(chol, GvRMatrix::zero(n, 1), Vec::Ones(n));
}

}  // namespace gvr
