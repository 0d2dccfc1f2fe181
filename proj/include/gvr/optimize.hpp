#pragma once

#include <functional>

#include "gvr/types.hpp"

namespace gvr {

struct NelderMeadOptions {
  double ftol = 1e-6;          // stop when f_max - f_min <= ftol (1 + |f_min|)
  double initial_step = 0.5;   // simplex edge in the transformed coordinates
  int max_evals = 2000;        // per run
  int max_restarts = 5;
  double restart_rtol = 1e-10;  // restart while the relative improvement exceeds this
};

struct NelderMeadResult {
  Vec x;
  double f = 0.0;
  int evals = 0;
  int restarts = 0;
};

// Unconstrained minimisation; NaN objective values are treated as +inf.
NelderMeadResult nelder_mead(const std::function<double(const Vec&)>& f, const Vec& x0,
                             const NelderMeadOptions& opt = {});

}  // namespace gvr
