#include "gvr/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace gvr {

namespace {

double safe(double v) { return std::isnan(v) ? std::numeric_limits<double>::infinity() : v; }

struct Run {
  Vec x;
  double f;
  int evals;
};

// Standard reflection / expansion / contraction / shrink steps.
Run one_run(const std::function<double(const Vec&)>& fun, const Vec& x0, const NelderMeadOptions& opt) {
  const Index n = x0.size();
  std::vector<Vec> pts(static_cast<std::size_t>(n + 1), x0);
  std::vector<double> fv(static_cast<std::size_t>(n + 1));
  int evals = 0;
  auto eval = [&](const Vec& x) {
    ++evals;
    return safe(fun(x));
  };
  fv[0] = eval(x0);
  for (Index k = 0; k < n; ++k) {
    auto& p = pts[static_cast<std::size_t>(k + 1)];
    p[k] += opt.initial_step;
    fv[static_cast<std::size_t>(k + 1)] = eval(p);
  }
  std::vector<std::size_t> order(pts.size());
  Vec centroid(n);
  while (true) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[order.size() - 2];
    const double fmin = fv[best], fmax = fv[worst];
    if (std::isfinite(fmax) && fmax - fmin <= opt.ftol * (1.0 + std::abs(fmin))) break;
    if (evals >= opt.max_evals) break;

    centroid.setZero();
    for (std::size_t k = 0; k < pts.size(); ++k)
      if (k != worst) centroid += pts[k];
    centroid /= static_cast<double>(n);

    const Vec xr = centroid + (centroid - pts[worst]);
    const double fr = eval(xr);
    if (fr < fmin) {
      const Vec xe = centroid + 2.0 * (centroid - pts[worst]);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[worst] = xe;
        fv[worst] = fe;
      } else {
        pts[worst] = xr;
        fv[worst] = fr;
      }
      continue;
    }
    if (fr < fv[second]) {
      pts[worst] = xr;
      fv[worst] = fr;
      continue;
    }
    const bool outside = fr < fmax;
    const Vec xc = outside ? Vec(centroid + 0.5 * (xr - centroid)) : Vec(centroid + 0.5 * (pts[worst] - centroid));
    const double fc = eval(xc);
    if (fc < (outside ? fr : fmax)) {
      pts[worst] = xc;
      fv[worst] = fc;
      continue;
    }
    for (std::size_t k = 0; k < pts.size(); ++k) {
      if (k == best) continue;
      pts[k] = pts[best] + 0.5 * (pts[k] - pts[best]);
      fv[k] = eval(pts[k]);
    }
  }
  const auto it = std::min_element(fv.begin(), fv.end());
  return {pts[static_cast<std::size_t>(it - fv.begin())], *it, evals};
}

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const Vec&)>& f, const Vec& x0, const NelderMeadOptions& opt) {
  Run r = one_run(f, x0, opt);
  NelderMeadResult out{r.x, r.f, r.evals, 0};
  while (out.restarts < opt.max_restarts) {
    Run next = one_run(f, out.x, opt);
    out.evals += next.evals;
    ++out.restarts;
    const double gain = out.f - next.f;
    if (next.f < out.f) {
      out.x = next.x;
      out.f = next.f;
    }
    if (!(gain > opt.restart_rtol * (1.0 + std::abs(out.f)))) break;
  }
  return out;
}

}  // namespace gvr
