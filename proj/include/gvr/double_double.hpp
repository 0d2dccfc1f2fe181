#pragma once

// Double-double arithmetic (about 32 significant digits, double exponent range).

#include <cmath>
#include <limits>
#include <ostream>

#include <Eigen/Core>

namespace gvr {

struct dd {
  double hi = 0.0, lo = 0.0;

  constexpr dd() = default;
  constexpr dd(double h) : hi(h), lo(0.0) {}  // NOLINT implicit on purpose
  constexpr dd(double h, double l) : hi(h), lo(l) {}
  constexpr dd(int v) : hi(static_cast<double>(v)), lo(0.0) {}  // NOLINT

  explicit operator double() const { return hi + lo; }
  double to_double() const { return hi + lo; }
};

namespace ddops {

inline dd two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

inline dd quick_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

}  // namespace ddops

inline dd operator+(const dd& a, const dd& b) {
  dd s = ddops::two_sum(a.hi, b.hi);
  dd t = ddops::two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = ddops::quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return ddops::quick_two_sum(s.hi, s.lo);
}

inline dd operator-(const dd& a) { return {-a.hi, -a.lo}; }
inline dd operator-(const dd& a, const dd& b) { return a + (-b); }

inline dd operator*(const dd& a, const dd& b) {
  dd p = ddops::two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return ddops::quick_two_sum(p.hi, p.lo);
}

inline dd operator/(const dd& a, const dd& b) {
  const double q1 = a.hi / b.hi;
  dd r = a - b * dd(q1);
  const double q2 = r.hi / b.hi;
  r = r - b * dd(q2);
  const double q3 = r.hi / b.hi;
  return dd(ddops::quick_two_sum(q1, q2)) + dd(q3);
}

inline dd& operator+=(dd& a, const dd& b) { return a = a + b; }
inline dd& operator-=(dd& a, const dd& b) { return a = a - b; }
inline dd& operator*=(dd& a, const dd& b) { return a = a * b; }
inline dd& operator/=(dd& a, const dd& b) { return a = a / b; }

inline bool operator==(const dd& a, const dd& b) { return a.hi == b.hi && a.lo == b.lo; }
inline bool operator!=(const dd& a, const dd& b) { return !(a == b); }
inline bool operator<(const dd& a, const dd& b) { return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo); }
inline bool operator>(const dd& a, const dd& b) { return b < a; }
inline bool operator<=(const dd& a, const dd& b) { return !(b < a); }
inline bool operator>=(const dd& a, const dd& b) { return !(a < b); }

inline dd abs(const dd& a) { return a.hi < 0.0 || (a.hi == 0.0 && a.lo < 0.0) ? -a : a; }

inline dd sqrt(const dd& a) {
  if (a.hi <= 0.0) return dd(std::sqrt(a.hi));
  const double x = 1.0 / std::sqrt(a.hi);
  const double ax = a.hi * x;
  const dd diff = a - ddops::two_prod(ax, ax);
  return ddops::two_sum(ax, diff.hi * (x * 0.5));
}

inline bool isfinite(const dd& a) { return std::isfinite(a.hi) && std::isfinite(a.lo); }
inline bool isnan(const dd& a) { return std::isnan(a.hi) || std::isnan(a.lo); }
inline bool isinf(const dd& a) { return std::isinf(a.hi); }

// a^k for integer k >= 0 by repeated squaring.
inline dd pow_int(dd a, unsigned k) {
  dd r(1.0);
  while (k) {
    if (k & 1u) r *= a;
    a *= a;
    k >>= 1u;
  }
  return r;
}

inline std::ostream& operator<<(std::ostream& os, const dd& a) { return os << a.to_double(); }

}  // namespace gvr

namespace Eigen {

template <>
struct NumTraits<gvr::dd> : GenericNumTraits<gvr::dd> {
  using Real = gvr::dd;
  using NonInteger = gvr::dd;
  using Nested = gvr::dd;
  using Literal = gvr::dd;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2,
    AddCost = 8,
    MulCost = 8,
  };
  static gvr::dd epsilon() { return gvr::dd(4.93038065763132e-32); }
  static gvr::dd dummy_precision() { return gvr::dd(1e-28); }
  static gvr::dd highest() { return gvr::dd(std::numeric_limits<double>::max()); }
  static gvr::dd lowest() { return gvr::dd(-std::numeric_limits<double>::max()); }
  static int digits10() { return 31; }
  static int digits() { return 106; }
};

}  // namespace Eigen
