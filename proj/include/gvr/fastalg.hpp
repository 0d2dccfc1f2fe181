#pragma once

#include "gvr/repkit.hpp"

namespace gvr {

// y = A x, O(Np).
Vec matvec(const GvRMatrix& a, const Vec& x);

// A + diag(d) = L L^T with L in GvR form sharing (c, s) with A. O(Np^2).
// Throws NotPositiveDefinite(i) when the pivot radicand is <= 1e-14 (c_i^T nu_i + d_i).
GvRCholesky cholesky(const GvRMatrix& a, const Vec& d);

double logdet(const GvRCholesky& chol);

Vec tri_matvec_lower(const GvRCholesky& chol, const Vec& x);  // L x
Vec tri_matvec_upper(const GvRCholesky& chol, const Vec& x);  // L^T x
Vec solve_lower(const GvRCholesky& chol, const Vec& y);       // L^{-1} y
Vec solve_upper(const GvRCholesky& chol, const Vec& y);       // L^{-T} y

// Implicit L^{-1}; needs every d_i > 0 (DegenerateDiagonal otherwise).
InvCholRep inv_chol_rep(const GvRCholesky& chol, const Vec& d);

// diag((A + D)^{-1}) by a backward sweep, O(Np^2).
Vec diag_inverse(const GvRCholesky& chol);

// tr(L^{-1} (At + diag(dt)) L^{-T}), O(N p pt).
double trace_form(const GvRCholesky& chol, const GvRMatrix& at, const Vec& dt);

// tr((A + D)^{-1}) = trace_form(chol, 0, 1).
double trace_inverse(const GvRCholesky& chol);

}  // namespace gvr
