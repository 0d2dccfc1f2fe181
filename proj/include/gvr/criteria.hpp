#pragma once

#include <string>

#include "gvr/types.hpp"

namespace gvr {

enum class Criterion { EB, SURE, GCV, GML };

struct CriterionReport {
  double eb = 0.0, sure = 0.0, gcv = 0.0, gml = 0.0;
  Vec alpha;  // M^{-1} y
  Vec yhat;   // Psi alpha
  double logdet = 0.0, trMinv = 0.0, yMinvy = 0.0, rss = 0.0;
};

// Fills the four objectives from the primitive quantities.
CriterionReport make_report(const Vec& y, Vec alpha, Vec yhat, double logdet, double trMinv, double gamma);

double criterion_value(const CriterionReport& r, Criterion c);

std::string to_string(Criterion c);
Criterion parse_criterion(const std::string& s);

}  // namespace gvr
