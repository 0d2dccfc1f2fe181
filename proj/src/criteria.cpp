#include "gvr/criteria.hpp"

#include <cmath>

#include "gvr/errors.hpp"

namespace gvr {

CriterionReport make_report(const Vec& y, Vec alpha, Vec yhat, double logdet, double trMinv, double gamma) {
  CriterionReport r;
  const double n = static_cast<double>(y.size());
  r.rss = (y - yhat).squaredNorm();
  r.yMinvy = y.dot(alpha);
  r.logdet = logdet;
  r.trMinv = trMinv;
  r.eb = r.yMinvy + logdet;
  r.sure = r.rss + 2.0 * gamma * (n - gamma * trMinv);
  const double gt = gamma * trMinv;
  r.gcv = n * n * r.rss / (gt * gt);
  r.gml = n * std::log(r.yMinvy) + logdet - n * std::log(n);
  r.alpha = std::move(alpha);
  r.yhat = std::move(yhat);
  return r;
}

double criterion_value(const CriterionReport& r, Criterion c) {
  switch (c) {
    case Criterion::EB:
      return r.eb;
    case Criterion::SURE:
      return r.sure;
    case Criterion::GCV:
      return r.gcv;
    case Criterion::GML:
      return r.gml;
  }
  return r.gcv;
}

std::string to_string(Criterion c) {
  switch (c) {
    case Criterion::EB:
      return "EB";
    case Criterion::SURE:
      return "SURE";
    case Criterion::GCV:
      return "GCV";
    case Criterion::GML:
      return "GML";
  }
  return "?";
}

Criterion parse_criterion(const std::string& s) {
  if (s == "EB") return Criterion::EB;
  if (s == "SURE") return Criterion::SURE;
  if (s == "GCV") return Criterion::GCV;
  if (s == "GML") return Criterion::GML;
  throw ValidationError("unknown criterion '" + s + "'");
}

}  // namespace gvr
