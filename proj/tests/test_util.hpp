#pragma once

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "gvr/fastalg.hpp"
#include "gvr/kernels.hpp"
#include "gvr/oracle.hpp"

namespace gvrtest {

using gvr::DenseMat;
using gvr::Index;
using gvr::Mat;
using gvr::Vec;
using LDMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using LDVec = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

inline double rel_fro(const DenseMat& a, const DenseMat& b) { return (a - b).norm() / b.norm(); }
inline double rel_vec(const Vec& a, const Vec& b) { return (a - b).norm() / b.norm(); }
inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

inline Vec random_vec(Index n, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vec v(n);
  for (Index i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

inline Mat random_mat(Index n, Index p, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Mat m(n, p);
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k < p; ++k) m(i, k) = u(rng);
  return m;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// One random structured test instance: the matrix in GvR form, its dense
// reconstruction in long double from the entry formulas, and the diagonal shift.
struct Instance {
  gvr::GvRMatrix a;
  LDMat A;
  double gamma;
};

enum class Family { DC, TC, SS, OutputS2 };

inline const char* family_name(Family f) {
  switch (f) {
    case Family::DC: return "DC";
    case Family::TC: return "TC";
    case Family::SS: return "SS";
    case Family::OutputS2: return "OutputS2";
  }
  return "?";
}

inline Instance random_instance(Family fam, Index n, double gamma, std::mt19937_64& rng) {
  const auto grid = gvr::TimeGrid::uniform(n);
  for (;;) {
    try {
      switch (fam) {
        case Family::DC: {
          const auto k = gvr::KernelSpec::dc(uniform(rng, 0.3, 0.95), uniform(rng, 0.3, 0.95));
          return {gvr::kernel_gvr(k, grid), gvr::dense_kernel_t<long double>(k, grid), gamma};
        }
        case Family::TC: {
          const auto k = gvr::KernelSpec::tc(uniform(rng, 0.3, 0.95));
          return {gvr::kernel_gvr(k, grid), gvr::dense_kernel_t<long double>(k, grid), gamma};
        }
        case Family::SS: {
          const auto k = gvr::KernelSpec::ss(uniform(rng, 0.3, 0.95));
          return {gvr::kernel_gvr(k, grid), gvr::dense_kernel_t<long double>(k, grid), gamma};
        }
        case Family::OutputS2: {
          const auto k = gvr::KernelSpec::dc(uniform(rng, 0.3, 0.95), uniform(rng, 0.3, 0.95));
          const double alpha = uniform(rng, 0.1, 1.5);
          const auto in = gvr::InputSignal::exponential(alpha);
          return {gvr::output_kernel_gvr(k, in, grid), gvr::dense_output_kernel_dt_t<long double>(k, alpha, grid),
                  gamma};
        }
      }
    } catch (const gvr::NearDegenerateParameters&) {
      // redraw
    }
  }
}

inline LDMat shifted(const Instance& in) {
  LDMat M = in.A;
  M.diagonal().array() += static_cast<long double>(in.gamma);
  return M;
}

inline DenseMat to_double(const LDMat& m) { return m.cast<double>(); }
inline Vec to_double(const LDVec& v) { return v.cast<double>(); }

}  // namespace gvrtest
