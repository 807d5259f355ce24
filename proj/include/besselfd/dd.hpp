// Double-double arithmetic (Dekker/Bailey style, ~32 significant digits).
// Used where plain double cancels to the noise floor: the Bessel power
// series, and the spectrum of near-singular interpolation matrices.
// two_prod relies on std::fma, which is exact on every target we build for.
#pragma once

#include <cmath>

namespace besselfd {

struct dd {
  double hi = 0.0;
  double lo = 0.0;

  dd() = default;
  dd(double h) : hi(h), lo(0.0) {}
  dd(double h, double l) : hi(h), lo(l) {}
};

inline dd two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

inline dd quick_two_sum(double a, double b) {  // requires |a| >= |b|
  double s = a + b;
  return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
  double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline dd operator+(dd a, dd b) {
  dd s = two_sum(a.hi, b.hi);
  s.lo += a.lo + b.lo;
  return quick_two_sum(s.hi, s.lo);
}

inline dd operator-(dd a) { return {-a.hi, -a.lo}; }
inline dd operator-(dd a, dd b) { return a + (-b); }

inline dd operator*(dd a, dd b) {
  dd p = two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p.hi, p.lo);
}

inline dd operator/(dd a, dd b) {
  double q1 = a.hi / b.hi;
  dd r = a - dd(q1) * b;
  double q2 = r.hi / b.hi;
  r = r - dd(q2) * b;
  double q3 = r.hi / b.hi;
  dd q = quick_two_sum(q1, q2);
  return q + dd(q3);
}

inline dd dd_sqrt(dd a) {
  if (a.hi <= 0.0) return {std::sqrt(a.hi), 0.0};  // 0 or NaN, caller's problem
  double s = std::sqrt(a.hi);
  dd r = (a - two_prod(s, s)) ;
  return quick_two_sum(s, r.hi / (2.0 * s) + r.lo / (2.0 * s));
}

inline dd fabs(dd a) { return a.hi < 0.0 ? -a : a; }
inline double to_double(dd a) { return a.hi + a.lo; }

inline bool operator<(dd a, dd b) { return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo); }
inline bool operator>(dd a, dd b) { return b < a; }
inline bool operator<=(dd a, dd b) { return !(b < a); }
inline bool operator>=(dd a, dd b) { return !(a < b); }

// pi to double-double precision
inline constexpr double DD_PI_HI = 3.14159265358979311600e+00;
inline constexpr double DD_PI_LO = 1.22464679914735320717e-16;

}  // namespace besselfd
