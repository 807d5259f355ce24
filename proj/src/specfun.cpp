#include "besselfd/specfun.hpp"

#include <cmath>
#include <stdexcept>

namespace besselfd::specfun {

namespace {

const dd DD_PI(DD_PI_HI, DD_PI_LO);
const dd DD_EULER(5.77215664901532866e-01, -4.94291515243064487e-18);

constexpr double SERIES_CUTOFF = 18.0;

void check_finite(double x, const char* who) {
  if (!std::isfinite(x)) throw std::domain_error(std::string(who) + ": non-finite argument");
}

// --- series path (|x| <= 18), double-double throughout -------------------

dd j0_series(dd x) {
  dd z = x * x / dd(4.0);
  dd term(1.0), sum(1.0);
  for (int m = 1; m < 80; ++m) {
    term = -(term * z) / dd(double(m) * double(m));
    sum = sum + term;
    if (std::fabs(term.hi) < 1e-36) break;
  }
  return sum;
}

dd j1_series(dd x) {
  dd z = x * x / dd(4.0);
  dd term(1.0), sum(1.0);
  for (int m = 1; m < 80; ++m) {
    term = -(term * z) / dd(double(m) * double(m + 1));
    sum = sum + term;
    if (std::fabs(term.hi) < 1e-36) break;
  }
  return (x / dd(2.0)) * sum;
}

dd y0_series(dd x) {
  dd z = x * x / dd(4.0);
  dd term(1.0), h(0.0), sum(0.0);
  for (int m = 1; m < 80; ++m) {
    term = -(term * z) / dd(double(m) * double(m));
    h = h + dd(1.0) / dd(double(m));
    sum = sum - term * h;  // (-1)^{m+1} H_m z^m / (m!)^2
    if (std::fabs(term.hi) < 1e-36) break;
  }
  dd lg = dd(std::log(x.hi / 2.0)) + DD_EULER;
  return (dd(2.0) / DD_PI) * (lg * j0_series(x) + sum);
}

dd y1_series(dd x) {
  dd z = x * x / dd(4.0);
  dd term(1.0), hm(0.0), hm1(1.0);
  dd sum = hm + hm1;  // m = 0
  for (int m = 1; m < 80; ++m) {
    term = -(term * z) / dd(double(m) * double(m + 1));
    hm = hm + dd(1.0) / dd(double(m));
    hm1 = hm1 + dd(1.0) / dd(double(m + 1));
    sum = sum + term * (hm + hm1);
    if (std::fabs(term.hi) < 1e-36) break;
  }
  dd lg = dd(std::log(x.hi / 2.0)) + DD_EULER;
  return (dd(2.0) / DD_PI) * lg * j1_series(x) - dd(2.0) / (DD_PI * x) -
         (x / (dd(2.0) * DD_PI)) * sum;
}

// --- asymptotic path (x > 18) ---------------------------------------------
// J_nu ~ sqrt(2/(pi x)) (P cos chi - Q sin chi), chi = x - (2 nu + 1) pi/4.
// The phase is reduced in split precision so the 1e4 end of the range keeps
// absolute accuracy; P and Q are fine in plain double there.

struct phase { double s, c; };

phase split_phase(double x, int nu) {
  // chi = x - (2nu+1) * pi/4, with the pi multiple carried hi/lo
  double f = (2 * nu + 1) * 0.25;
  dd sub = two_prod(DD_PI_HI, f);
  sub.lo += DD_PI_LO * f;
  dd chi = two_sum(x, -sub.hi);
  double e = chi.lo - sub.lo;
  double s = std::sin(chi.hi), c = std::cos(chi.hi);
  return {s + e * c, c - e * s};
}

struct pq { double p, q; };

pq asym_pq(double x, int mu) {
  double p = 1.0, qq = 0.0, c = 1.0, prev = 1e300;
  for (int j = 1; j < 40; ++j) {
    c *= (mu - double(2 * j - 1) * double(2 * j - 1)) / (8.0 * j * x);
    if (std::fabs(c) > prev) break;
    prev = std::fabs(c);
    int m = j / 2;
    double sc = (m % 2 == 0) ? c : -c;
    if (j % 2 == 0)
      p += sc;
    else
      qq += sc;
    if (std::fabs(c) < 1e-19) break;
  }
  return {p, qq};
}

double asym(double x, int nu, bool second_kind) {
  pq a = asym_pq(x, 4 * nu * nu);
  phase ph = split_phase(x, nu);
  double amp = std::sqrt(2.0 / (M_PI * x));
  return second_kind ? amp * (a.p * ph.s + a.q * ph.c)
                     : amp * (a.p * ph.c - a.q * ph.s);
}

}  // namespace

double j0(double x) {
  check_finite(x, "j0");
  x = std::fabs(x);
  if (x <= SERIES_CUTOFF) return to_double(j0_series(dd(x)));
  return asym(x, 0, false);
}

double j1(double x) {
  check_finite(x, "j1");
  double sign = x < 0 ? -1.0 : 1.0;
  x = std::fabs(x);
  if (x <= SERIES_CUTOFF) return sign * to_double(j1_series(dd(x)));
  return sign * asym(x, 1, false);
}

double y0(double x) {
  check_finite(x, "y0");
  if (x <= 0.0) throw std::domain_error("y0: requires x > 0");
  if (x <= SERIES_CUTOFF) return to_double(y0_series(dd(x)));
  return asym(x, 0, true);
}

double y1(double x) {
  check_finite(x, "y1");
  if (x <= 0.0) throw std::domain_error("y1: requires x > 0");
  if (x <= SERIES_CUTOFF) return to_double(y1_series(dd(x)));
  return asym(x, 1, true);
}

std::complex<double> hankel1_0(double x) { return {j0(x), y0(x)}; }

dd j0_dd(dd x) {
  x = fabs(x);
  if (x.hi <= 30.0) return j0_series(x);
  return dd(asym(to_double(x), 0, false));
}

dd j1_dd(dd x) {
  dd s = x.hi < 0 ? dd(-1.0) : dd(1.0);
  x = fabs(x);
  if (x.hi <= 30.0) return s * j1_series(x);
  return s * dd(asym(to_double(x), 1, false));
}

}  // namespace besselfd::specfun
