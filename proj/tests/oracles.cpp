#include "oracles.hpp"

#include <quadmath.h>

#include <cmath>
#include <cstdint>
#include <random>

namespace oracle {

namespace {

using q = __float128;

const q QPI = M_PIq;
const q EULER_GAMMA = 0.57721566490153286060651209008240243104Q;

// Neumaier-compensated accumulator.
struct qsum {
  q s = 0, c = 0;
  void add(q v) {
    q t = s + v;
    if (fabsq(s) >= fabsq(v))
      c += (s - t) + v;
    else
      c += (v - t) + s;
    s = t;
  }
  q value() const { return s + c; }
};

// Maclaurin series, reliable (peak term ~1e11 at x=30, quad carries 33
// digits) for x <= 30.
q j0_series(q x) {
  q z = x * x / 4;
  qsum acc;
  q term = 1;
  acc.add(term);
  for (int m = 1; m < 200; ++m) {
    term *= -z / (q(m) * q(m));
    acc.add(term);
    if (fabsq(term) < 1e-45Q) break;
  }
  return acc.value();
}

q j1_series(q x) {
  q z = x * x / 4;
  qsum acc;
  q term = 1;  // term_m = (-z)^m / (m! (m+1)!)
  acc.add(term);
  for (int m = 1; m < 200; ++m) {
    term *= -z / (q(m) * q(m + 1));
    acc.add(term);
    if (fabsq(term) < 1e-45Q) break;
  }
  return (x / 2) * acc.value();
}

q y0_series(q x) {
  q z = x * x / 4;
  qsum acc;
  q term = 1, h = 0;
  for (int m = 1; m < 200; ++m) {
    term *= -z / (q(m) * q(m));
    h += 1 / q(m);
    acc.add(-term * h);  // (-1)^{m+1} H_m z^m / (m!)^2
    if (fabsq(term) < 1e-45Q) break;
  }
  return (2 / QPI) * ((logq(x / 2) + EULER_GAMMA) * j0_series(x) + acc.value());
}

q y1_series(q x) {
  q z = x * x / 4;
  qsum acc;
  q term = 1, hm = 0, hm1 = 1;  // H_0 = 0, H_1 = 1
  acc.add(hm + hm1);
  for (int m = 1; m < 200; ++m) {
    term *= -z / (q(m) * q(m + 1));
    hm += 1 / q(m);
    hm1 += 1 / q(m + 1);
    acc.add(term * (hm + hm1));
    if (fabsq(term) < 1e-45Q) break;
  }
  return (2 / QPI) * (logq(x / 2) + EULER_GAMMA) * j1_series(x) -
         2 / (QPI * x) - (x / (2 * QPI)) * acc.value();
}

// Hankel asymptotic expansion for x > 30: truncated at the smallest term,
// which is ~exp(-2x) relative -- far below quad epsilon for x > 40 and below
// 1e-26 at x = 30.
struct pq { q p, qq; };

pq asymptotic_pq(q x, int mu) {
  qsum ps, qs;
  q c = 1;
  ps.add(c);
  q prev = 1e30Q;
  for (int j = 1; j < 80; ++j) {
    c *= (q(mu) - q(2 * j - 1) * q(2 * j - 1)) / (8 * q(j) * x);
    if (fabsq(c) > prev) break;  // series turned divergent
    prev = fabsq(c);
    int m = j / 2;
    q signed_c = (m % 2 == 0) ? c : -c;
    if (j % 2 == 0)
      ps.add(signed_c);
    else
      qs.add(signed_c);
    if (fabsq(c) < 1e-42Q) break;
  }
  return {ps.value(), qs.value()};
}

q bessel_asymptotic(q x, int nu, bool second_kind) {
  pq a = asymptotic_pq(x, 4 * nu * nu);
  q chi = x - (2 * nu + 1) * QPI / 4;
  q amp = sqrtq(2 / (QPI * x));
  if (second_kind) return amp * (a.p * sinq(chi) + a.qq * cosq(chi));
  return amp * (a.p * cosq(chi) - a.qq * sinq(chi));
}

}  // namespace

double j0(double x) {
  x = std::fabs(x);
  if (x <= 30) return (double)j0_series(x);
  return (double)bessel_asymptotic(x, 0, false);
}

double j1(double x) {
  double s = x < 0 ? -1.0 : 1.0;
  x = std::fabs(x);
  if (x <= 30) return s * (double)j1_series(x);
  return s * (double)bessel_asymptotic(x, 1, false);
}

double y0(double x) {
  if (!(x > 0)) throw std::domain_error("oracle::y0: requires x > 0");
  if (x <= 30) return (double)y0_series(x);
  return (double)bessel_asymptotic(x, 0, true);
}

double y1(double x) {
  if (!(x > 0)) throw std::domain_error("oracle::y1: requires x > 0");
  if (x <= 30) return (double)y1_series(x);
  return (double)bessel_asymptotic(x, 1, true);
}

// ---------------------------------------------------------------------------

std::vector<cplx> lu_solve(cmat a, std::vector<cplx> b) {
  const size_t n = a.size();
  if (n == 0 || a[0].size() != n || b.size() != n)
    throw std::runtime_error("oracle::lu_solve: shape mismatch");
  std::vector<size_t> piv(n);
  for (size_t i = 0; i < n; ++i) piv[i] = i;
  for (size_t k = 0; k < n; ++k) {
    size_t p = k;
    double best = std::abs(a[k][k]);
    for (size_t i = k + 1; i < n; ++i)
      if (std::abs(a[i][k]) > best) { best = std::abs(a[i][k]); p = i; }
    if (best == 0.0) throw std::runtime_error("oracle::lu_solve: singular");
    if (p != k) { std::swap(a[p], a[k]); std::swap(b[p], b[k]); }
    for (size_t i = k + 1; i < n; ++i) {
      cplx m = a[i][k] / a[k][k];
      a[i][k] = m;
      for (size_t j = k + 1; j < n; ++j) a[i][j] -= m * a[k][j];
      b[i] -= m * b[k];
    }
  }
  for (size_t i = n; i-- > 0;) {
    cplx s = b[i];
    for (size_t j = i + 1; j < n; ++j) s -= a[i][j] * b[j];
    b[i] = s / a[i][i];
  }
  return b;
}

cmat lu_inverse(const cmat& a) {
  const size_t n = a.size();
  cmat inv(n, std::vector<cplx>(n));
  for (size_t col = 0; col < n; ++col) {
    std::vector<cplx> e(n, cplx(0));
    e[col] = 1;
    std::vector<cplx> x = lu_solve(a, e);
    for (size_t i = 0; i < n; ++i) inv[i][col] = x[i];
  }
  return inv;
}

std::vector<std::vector<double>> matrix_with_spectrum(
    const std::vector<double>& lam, unsigned seed) {
  const size_t n = lam.size();
  std::mt19937 rng(seed);
  auto unit = [&rng]() {  // uniform in (0,1), explicit bit mapping
    return (rng() + 0.5) * (1.0 / 4294967296.0);
  };
  // Gaussian via Box-Muller, then modified Gram-Schmidt columns.
  std::vector<std::vector<double>> qmat(n, std::vector<double>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      double u1 = unit(), u2 = unit();
      qmat[i][j] = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }
  for (size_t j = 0; j < n; ++j) {
    for (size_t p = 0; p < j; ++p) {
      double dot = 0;
      for (size_t i = 0; i < n; ++i) dot += qmat[i][p] * qmat[i][j];
      for (size_t i = 0; i < n; ++i) qmat[i][j] -= dot * qmat[i][p];
    }
    double nrm = 0;
    for (size_t i = 0; i < n; ++i) nrm += qmat[i][j] * qmat[i][j];
    nrm = std::sqrt(nrm);
    if (nrm < 1e-8) throw std::runtime_error("matrix_with_spectrum: degenerate draw");
    for (size_t i = 0; i < n; ++i) qmat[i][j] /= nrm;
  }
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i; j < n; ++j) {
      double s = 0;
      for (size_t p = 0; p < n; ++p) s += qmat[i][p] * lam[p] * qmat[j][p];
      a[i][j] = s;
      a[j][i] = s;
    }
  return a;
}

// ---------------------------------------------------------------------------

namespace {
// fourth-order central stencils
template <class F>
cplx c1(const F& f, double h) {
  return (-f(2) + 8.0 * f(1) - 8.0 * f(-1) + f(-2)) / (12.0 * h);
}
template <class F>
cplx c2(const F& f, double h) {
  return (-f(2) + 16.0 * f(1) - 30.0 * f(0) + 16.0 * f(-1) - f(-2)) /
         (12.0 * h * h);
}
}  // namespace

cplx fd_probe::dx(double x, double y) const {
  double h = 0.01 / scale;
  return c1([&](int s) { return f(x + s * h, y); }, h);
}

cplx fd_probe::dy(double x, double y) const {
  double h = 0.01 / scale;
  return c1([&](int s) { return f(x, y + s * h); }, h);
}

cplx fd_probe::laplacian(double x, double y) const {
  double h = 0.01 / scale;
  return c2([&](int s) { return f(x + s * h, y); }, h) +
         c2([&](int s) { return f(x, y + s * h); }, h);
}

cplx fd_probe::dir1(double x, double y, double ux, double uy) const {
  double h = 0.01 / scale;
  return c1([&](int s) { return f(x + s * h * ux, y + s * h * uy); }, h);
}

cplx fd_probe::dir2(double x, double y, double ux, double uy) const {
  double h = 0.01 / scale;
  return c2([&](int s) { return f(x + s * h * ux, y + s * h * uy); }, h);
}

cplx fd_probe::dn_dtau2(double x, double y, double nx, double ny,
                        double tx, double ty) const {
  double h = 0.01 / scale;
  auto t2 = [&](double px, double py) {
    return c2([&](int s) { return f(px + s * h * tx, py + s * h * ty); }, h);
  };
  return (t2(x + h * nx, y + h * ny) - t2(x - h * nx, y - h * ny)) / (2.0 * h);
}

}  // namespace oracle
