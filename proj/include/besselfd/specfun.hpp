// Bessel functions of the first and second kind, orders 0 and 1.
// Power/log series in double-double arithmetic up to x = 18, Hankel
// asymptotic expansion with split-phase reduction beyond.  Absolute error
// stays below 1e-13 * max(1, |value|) out to x = 1e4, which is what the
// kernel evaluations and the reference fields need.
#pragma once

#include <complex>

#include "besselfd/dd.hpp"

namespace besselfd::specfun {

// Throw std::domain_error on non-finite input; y0/y1 additionally require
// x > 0 (the functions diverge at the origin).
double j0(double x);
double j1(double x);
double y0(double x);
double y1(double x);

// H0^(1)(x) = J0(x) + i Y0(x), x > 0
std::complex<double> hankel1_0(double x);

// Series-path evaluations carried in double-double, for callers that need
// the interpolation matrix beyond double roundoff (spectrum reporting).
// Valid for |x| <= 30; larger arguments fall back to double accuracy.
dd j0_dd(dd x);
dd j1_dd(dd x);

}  // namespace besselfd::specfun
