#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gvr {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : Error {
  using Error::Error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

// Raised by the Cholesky recursions; index is the 0-based pivot that broke down.
struct NotPositiveDefinite : Error {
  NotPositiveDefinite(std::size_t i, const std::string& context = {})
      : Error("matrix is not positive definite at index " + std::to_string(i) +
              (context.empty() ? "" : " (" + context + ")")),
        index(i) {}
  std::size_t index;
};

struct DegenerateDiagonal : Error {
  using Error::Error;
};

struct SingularYW : Error {
  SingularYW(double cond)
      : Error("Y^T W - I is numerically singular (condition " + std::to_string(cond) + ")"),
        condition(cond) {}
  double condition;
};

struct DegenerateReference : Error {
  using Error::Error;
};

struct AllEvaluationsFailed : Error {
  using Error::Error;
};

struct NearDegenerateParameters : Error {
  using Error::Error;
};

}  // namespace gvr
